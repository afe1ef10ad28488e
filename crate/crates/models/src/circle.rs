//! The antiperiodic circle model: D has spectrum n + 1/2 on the modes
//! e^{i n theta}, |n| <= N, so it is invertible outright; the algebra is
//! generated by the shift u = e^{i theta}. A conformal factor e^h with h a
//! self-adjoint trigonometric polynomial produces the twisted variant.

use std::collections::BTreeMap;

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::linalg::{self, CMat};
use crate::triple::{DOperator, ModelError, ModelKind, ModelTriple};

/// Central window of `fraction` of the dimension.
fn central_window(dim: usize, fraction: f64) -> (usize, usize) {
    let count = ((dim as f64) * fraction).ceil() as usize;
    let count = count.clamp(1, dim);
    let lo = (dim - count) / 2;
    (lo, lo + count)
}

/// Shift matrix: multiplication by e^{i k theta} truncated to the window.
pub fn circle_shift(dim: usize, k: i64) -> CMat {
    let mut m = Array2::from_elem((dim, dim), linalg::czero());
    for col in 0..dim as i64 {
        let row = col + k;
        if row >= 0 && row < dim as i64 {
            m[[row as usize, col as usize]] = linalg::cone();
        }
    }
    m
}

/// Multiplication operator by a trigonometric polynomial with coefficients
/// `(k, c_k)`; self-adjoint iff `c_{-k} = conj(c_k)`.
pub fn circle_trig_poly(dim: usize, coeffs: &[(i64, Complex64)]) -> CMat {
    let mut m = Array2::from_elem((dim, dim), linalg::czero());
    for &(k, c) in coeffs {
        for col in 0..dim as i64 {
            let row = col + k;
            if row >= 0 && row < dim as i64 {
                m[[row as usize, col as usize]] += c;
            }
        }
    }
    m
}

pub fn build_circle(cutoff: i64, inner_fraction: f64) -> Result<ModelTriple, ModelError> {
    if cutoff < 4 {
        return Err(ModelError::CutoffTooSmall(cutoff));
    }
    let dim = (2 * cutoff + 1) as usize;
    let d = Array1::from_shape_fn(dim, |i| (i as i64 - cutoff) as f64 + 0.5);
    let (inner_lo, inner_hi) = central_window(dim, inner_fraction.clamp(0.05, 1.0));
    let mut algebra = BTreeMap::new();
    algebra.insert("u".to_string(), circle_shift(dim, 1));
    algebra.insert("u*".to_string(), circle_shift(dim, -1));
    let triple = ModelTriple {
        kind: ModelKind::Circle { cutoff },
        outer_dim: dim,
        inner_lo,
        inner_hi,
        d_op: DOperator::Diagonal(d),
        grading: None,
        algebra,
        unitaries: BTreeMap::new(),
        boundary_tol: 1e-10,
    };
    Ok(triple)
}

/// Self-adjoint trigonometric polynomial datum for the conformal factor.
#[derive(Clone, Debug)]
pub struct CirclePerturbation {
    pub coeffs: Vec<(i64, Complex64)>,
}

impl CirclePerturbation {
    pub fn cosine(amplitude: f64) -> Self {
        let half = Complex64::new(amplitude / 2.0, 0.0);
        CirclePerturbation {
            coeffs: vec![(1, half), (-1, half)],
        }
    }

    pub fn is_self_adjoint(&self) -> bool {
        let map: BTreeMap<i64, Complex64> = {
            let mut m: BTreeMap<i64, Complex64> = BTreeMap::new();
            for &(k, c) in &self.coeffs {
                *m.entry(k).or_insert(linalg::czero()) += c;
            }
            m
        };
        map.iter().all(|(&k, &c)| {
            let conj_entry = map.get(&-k).copied().unwrap_or(linalg::czero());
            (conj_entry - c.conj()).norm() < 1e-14
        })
    }
}

/// The conformally perturbed circle: D_h = e^h D e^h with inner twist
/// sigma_h(a) = e^{2h} a e^{-2h}, realized by explicit conjugation
/// matrices.
pub struct ConformalModel {
    pub base: ModelTriple,
    pub h: CMat,
    pub e: CMat,
    pub e_inv: CMat,
    pub e2: CMat,
    pub e2_inv: CMat,
    pub d_h: CMat,
    d_h_lu: linalg::Lu,
    d_lu: linalg::Lu,
}

pub fn conformal_perturb(
    base: &ModelTriple,
    h: &CirclePerturbation,
) -> Result<ConformalModel, ModelError> {
    if !h.is_self_adjoint() {
        return Err(ModelError::NotSelfAdjoint);
    }
    let dim = base.outer_dim;
    let hmat = circle_trig_poly(dim, &h.coeffs);
    let e = linalg::expm(&hmat);
    let e_inv = linalg::expm(&linalg::scale(&hmat, Complex64::new(-1.0, 0.0)));
    let e2 = linalg::matmul(&e, &e);
    let e2_inv = linalg::matmul(&e_inv, &e_inv);
    let d = base.d_matrix();
    let d_h = linalg::matmul(&linalg::matmul(&e, &d), &e);
    let d_h_lu = linalg::lu_factor(&d_h);
    let d_lu = linalg::lu_factor(&d);
    Ok(ConformalModel {
        base: base.clone(),
        h: hmat,
        e,
        e_inv,
        e2,
        e2_inv,
        d_h,
        d_h_lu,
        d_lu,
    })
}

impl ConformalModel {
    /// The twist sigma_h(a) = e^{2h} a e^{-2h}.
    pub fn sigma_h(&self, a: &CMat) -> CMat {
        linalg::matmul(&linalg::matmul(&self.e2, a), &self.e2_inv)
    }

    /// The half twist sigma_{h/2}(a) = e^{h} a e^{-h}.
    pub fn sigma_half(&self, a: &CMat) -> CMat {
        linalg::matmul(&linalg::matmul(&self.e, a), &self.e_inv)
    }

    /// Twisted commutator [D_h, a]_sigma = D_h a - sigma_h(a) D_h.
    pub fn twisted_commutator(&self, a: &CMat) -> CMat {
        let left = linalg::matmul(&self.d_h, a);
        let right = linalg::matmul(&self.sigma_h(a), &self.d_h);
        linalg::sub(&left, &right)
    }

    /// D_h^{-1} [D_h, a]_sigma via a factored solve.
    pub fn resolvent_commutator(&self, a: &CMat) -> CMat {
        self.d_h_lu.solve_mat(&self.twisted_commutator(a))
    }

    /// Untwisted counterpart D^{-1}[D, sigma_{h/2}(a)].
    pub fn untwisted_counterpart(&self, a: &CMat) -> CMat {
        let b = self.sigma_half(a);
        let d = self.base.d_matrix();
        let comm = linalg::sub(&linalg::matmul(&d, &b), &linalg::matmul(&b, &d));
        self.d_lu.solve_mat(&comm)
    }

    /// Residual of the conjugation identity
    /// `D_h^{-1}[D_h,a]_sigma = e^{-h} D^{-1}[D, sigma_{h/2}(a)] e^{h}`
    /// in operator norm on the inner window.
    pub fn clue_residual(&self, a: &CMat) -> f64 {
        let lhs = self.resolvent_commutator(a);
        let rhs = linalg::matmul(
            &linalg::matmul(&self.e_inv, &self.untwisted_counterpart(a)),
            &self.e,
        );
        self.base.inner_norm(&linalg::sub(&lhs, &rhs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_at_cutoff_four() {
        let m = build_circle(4, 1.0).unwrap();
        let d = m.d_diag().unwrap();
        let expected: Vec<f64> = (-4..=4).map(|n| n as f64 + 0.5).collect();
        assert_eq!(d.to_vec(), expected);
        assert!(m.min_abs_d() == 0.5);
    }

    #[test]
    fn commutator_with_shift_is_interior_shift() {
        // [D, u] e_n = e_{n+1} in the interior.
        let m = build_circle(8, 0.5).unwrap();
        let u = m.algebra["u"].clone();
        let d = m.d_matrix();
        let comm = linalg::sub(&linalg::matmul(&d, &u), &linalg::matmul(&u, &d));
        for col in 1..(m.outer_dim - 1) {
            assert!((comm[[col + 1, col]] - linalg::cone()).norm() < 1e-14);
        }
    }

    #[test]
    fn phase_commutator_with_shift_has_rank_one() {
        let m = build_circle(6, 1.0).unwrap();
        let u = m.algebra["u"].clone();
        let f = m.phase();
        let comm = linalg::sub(&linalg::matmul(&f, &u), &linalg::matmul(&u, &f));
        let sv = linalg::singular_values(&comm);
        let rank = sv.iter().filter(|&&s| s > 1e-10).count();
        assert_eq!(rank, 1);
    }

    #[test]
    fn zero_perturbation_is_identity() {
        let m = build_circle(6, 1.0).unwrap();
        let h = CirclePerturbation { coeffs: vec![] };
        let c = conformal_perturb(&m, &h).unwrap();
        assert!(linalg::frobenius(&linalg::sub(&c.d_h, &m.d_matrix())) < 1e-13);
        let a = m.algebra["u"].clone();
        assert!(linalg::frobenius(&linalg::sub(&c.sigma_h(&a), &a)) < 1e-13);
    }

    #[test]
    fn conjugation_identity_holds_interiorly() {
        let m = build_circle(24, 0.5).unwrap();
        let h = CirclePerturbation::cosine(0.3);
        let c = conformal_perturb(&m, &h).unwrap();
        let a = m.algebra["u"].clone();
        let r = c.clue_residual(&a);
        assert!(r < 1e-8, "residual {r}");
    }
}
