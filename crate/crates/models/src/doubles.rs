//! Doubling constructions: the graded double of an odd triple and the
//! invertible double (with unit or smoothing mass).

use std::collections::BTreeMap;

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::linalg::{self, CMat};
use crate::triple::{DOperator, ModelError, ModelKind, ModelTriple, Unitary};

fn block2(m: usize, b00: &CMat, b01: &CMat, b10: &CMat, b11: &CMat) -> CMat {
    let mut out = Array2::from_elem((2 * m, 2 * m), linalg::czero());
    for i in 0..m {
        for j in 0..m {
            out[[i, j]] = b00[[i, j]];
            out[[i, m + j]] = b01[[i, j]];
            out[[m + i, j]] = b10[[i, j]];
            out[[m + i, m + j]] = b11[[i, j]];
        }
    }
    out
}

fn zeros(m: usize) -> CMat {
    Array2::from_elem((m, m), linalg::czero())
}

/// Graded double of an odd triple: dimension doubles, the operator becomes
/// off-diagonal (+-iD), the grading is diag(1, -1) blockwise, the algebra
/// acts diagonally, and the odd generator `eps` is available.
pub fn graded_double(m: &ModelTriple) -> Result<ModelTriple, ModelError> {
    if m.grading.is_some() {
        return Err(ModelError::AlreadyGraded);
    }
    let n = m.outer_dim;
    let d = m.d_matrix();
    let i = Complex64::new(0.0, 1.0);
    let d_gr = block2(
        n,
        &zeros(n),
        &linalg::scale(&d, i),
        &linalg::scale(&d, -i),
        &zeros(n),
    );
    let d2 = {
        let base = m.d2_diag();
        let mut v = Array1::from_elem(2 * n, 0.0);
        for k in 0..n {
            v[k] = base[k];
            v[n + k] = base[k];
        }
        v
    };
    let grading = {
        let mut g = Array1::from_elem(2 * n, 1.0);
        for k in 0..n {
            g[n + k] = -1.0;
        }
        g
    };
    let mut algebra = BTreeMap::new();
    for (name, a) in &m.algebra {
        algebra.insert(name.clone(), block2(n, a, &zeros(n), &zeros(n), a));
    }
    let id = linalg::identity(n);
    algebra.insert(
        "eps".to_string(),
        block2(n, &zeros(n), &id, &id, &zeros(n)),
    );
    let mut unitaries = BTreeMap::new();
    for (name, u) in &m.unitaries {
        unitaries.insert(
            name.clone(),
            Unitary {
                mat: block2(n, &u.mat, &zeros(n), &zeros(n), &u.mat),
                mu: u.mu,
                shift: u.shift,
            },
        );
    }
    Ok(ModelTriple {
        kind: ModelKind::GradedDouble,
        outer_dim: 2 * n,
        inner_lo: 0,
        inner_hi: 2 * n,
        d_op: DOperator::Matrix { mat: d_gr, d2 },
        grading: Some(grading),
        algebra,
        unitaries,
        boundary_tol: m.boundary_tol,
    })
}

#[derive(Clone)]
pub enum Mass {
    Unit,
    /// A smoothing mass commuting with D, given as a matrix.
    Smoothing(CMat),
}

/// Invertible double of a graded triple: the operator gains an
/// anticommuting mass block, making its square diagonal and bounded below.
pub fn invertible_double(m: &ModelTriple, mass: Mass) -> Result<ModelTriple, ModelError> {
    let grading = m.grading.as_ref().ok_or(ModelError::NotGraded)?;
    let n = m.outer_dim;
    let d = m.d_matrix();
    let gamma = linalg::from_diag(grading);
    let k_mat = match &mass {
        Mass::Unit => linalg::identity(n),
        Mass::Smoothing(k) => {
            let comm = linalg::sub(&linalg::matmul(k, &d), &linalg::matmul(&d, k));
            if linalg::frobenius(&comm) > 1e-10 * (1.0 + linalg::frobenius(k)) {
                return Err(ModelError::BadMass(
                    "mass does not commute with the operator".into(),
                ));
            }
            k.clone()
        }
    };
    let gk = linalg::matmul(&gamma, &k_mat);
    let d_tilde = block2(n, &d, &gk, &gk, &d);
    // Square must be diagonal and invertible.
    let sq = linalg::matmul(&d_tilde, &d_tilde);
    let mut d2 = Array1::from_elem(2 * n, 0.0);
    let mut offdiag = 0.0f64;
    for r in 0..2 * n {
        for c in 0..2 * n {
            if r == c {
                d2[r] = sq[[r, c]].re;
            } else {
                offdiag = offdiag.max(sq[[r, c]].norm());
            }
        }
    }
    if offdiag > 1e-10 {
        return Err(ModelError::BadMass(format!(
            "square is not diagonal (off-diagonal {offdiag:.3e})"
        )));
    }
    let min = d2.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    if min <= 0.0 {
        return Err(ModelError::BadMass("square not bounded below".into()));
    }
    let e1_embed = |a: &CMat| block2(n, a, &zeros(n), &zeros(n), &zeros(n));
    let mut algebra = BTreeMap::new();
    for (name, a) in &m.algebra {
        algebra.insert(name.clone(), e1_embed(a));
    }
    let mut unitaries = BTreeMap::new();
    for (name, u) in &m.unitaries {
        unitaries.insert(
            name.clone(),
            Unitary {
                mat: block2(n, &u.mat, &zeros(n), &zeros(n), &u.mat),
                mu: u.mu,
                shift: u.shift,
            },
        );
    }
    let new_grading = {
        let mut g = Array1::from_elem(2 * n, 0.0);
        for r in 0..n {
            g[r] = grading[r];
            g[n + r] = -grading[r];
        }
        g
    };
    Ok(ModelTriple {
        kind: ModelKind::InvertibleDouble,
        outer_dim: 2 * n,
        inner_lo: 0,
        inner_hi: 2 * n,
        d_op: DOperator::Matrix { mat: d_tilde, d2 },
        grading: Some(new_grading),
        algebra,
        unitaries,
        boundary_tol: m.boundary_tol,
    })
}
