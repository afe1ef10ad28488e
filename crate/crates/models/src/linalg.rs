//! Dense complex linear algebra helpers: band-aware multiplication, LU with
//! partial pivoting, one-sided Jacobi singular values, Hermitian Jacobi
//! eigendecomposition, matrix exponential by scaling and squaring.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

pub type CMat = Array2<Complex64>;
pub type CVec = Array1<Complex64>;

pub fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

pub fn cone() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Effective bandwidth: max |i - j| over entries above a hard floor.
pub fn bandwidth(a: &CMat) -> usize {
    let n = a.nrows();
    let mut b = 0usize;
    for i in 0..n {
        for j in 0..a.ncols() {
            if a[[i, j]].norm_sqr() > 1e-600 {
                b = b.max(i.abs_diff(j));
            }
        }
    }
    b
}

/// Matrix product that walks only the occupied bands of both factors.
pub fn matmul(a: &CMat, b: &CMat) -> CMat {
    let (n, m) = (a.nrows(), b.ncols());
    let k = a.ncols();
    assert_eq!(k, b.nrows(), "dimension mismatch");
    let ba = bandwidth(a);
    let bb = bandwidth(b);
    let mut out = Array2::from_elem((n, m), czero());
    // When either factor is effectively dense, fall back to the plain loop.
    if ba.saturating_add(bb) >= n {
        for i in 0..n {
            for l in 0..k {
                let ail = a[[i, l]];
                if ail == czero() {
                    continue;
                }
                for j in 0..m {
                    out[[i, j]] += ail * b[[l, j]];
                }
            }
        }
        return out;
    }
    for i in 0..n {
        let lo = i.saturating_sub(ba);
        let hi = (i + ba + 1).min(k);
        for l in lo..hi {
            let ail = a[[i, l]];
            if ail == czero() {
                continue;
            }
            let jlo = l.saturating_sub(bb);
            let jhi = (l + bb + 1).min(m);
            for j in jlo..jhi {
                out[[i, j]] += ail * b[[l, j]];
            }
        }
    }
    out
}

pub fn matvec(a: &CMat, x: &CVec) -> CVec {
    let n = a.nrows();
    let mut out = Array1::from_elem(n, czero());
    for i in 0..n {
        let mut acc = czero();
        for j in 0..a.ncols() {
            acc += a[[i, j]] * x[j];
        }
        out[i] = acc;
    }
    out
}

pub fn adjoint(a: &CMat) -> CMat {
    let (n, m) = (a.nrows(), a.ncols());
    let mut out = Array2::from_elem((m, n), czero());
    for i in 0..n {
        for j in 0..m {
            out[[j, i]] = a[[i, j]].conj();
        }
    }
    out
}

pub fn identity(n: usize) -> CMat {
    let mut out = Array2::from_elem((n, n), czero());
    for i in 0..n {
        out[[i, i]] = cone();
    }
    out
}

pub fn from_diag(d: &Array1<f64>) -> CMat {
    let n = d.len();
    let mut out = Array2::from_elem((n, n), czero());
    for i in 0..n {
        out[[i, i]] = Complex64::new(d[i], 0.0);
    }
    out
}

pub fn scale(a: &CMat, c: Complex64) -> CMat {
    a.mapv(|x| x * c)
}

pub fn add(a: &CMat, b: &CMat) -> CMat {
    a + b
}

pub fn sub(a: &CMat, b: &CMat) -> CMat {
    a - b
}

pub fn trace(a: &CMat) -> Complex64 {
    let mut acc = czero();
    for i in 0..a.nrows() {
        acc += a[[i, i]];
    }
    acc
}

/// Trace of a product without forming it.
pub fn trace_of_product(a: &CMat, b: &CMat) -> Complex64 {
    let mut acc = czero();
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            acc += a[[i, j]] * b[[j, i]];
        }
    }
    acc
}

pub fn frobenius(a: &CMat) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Operator norm = largest singular value.
pub fn op_norm(a: &CMat) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// Restriction of a matrix to a sub-window of indices.
pub fn compress(a: &CMat, lo: usize, hi: usize) -> CMat {
    let m = hi - lo;
    let mut out = Array2::from_elem((m, m), czero());
    for i in 0..m {
        for j in 0..m {
            out[[i, j]] = a[[lo + i, lo + j]];
        }
    }
    out
}

/// LU factorization with partial pivoting.
pub struct Lu {
    lu: CMat,
    piv: Vec<usize>,
    pub singular: bool,
}

pub fn lu_factor(a: &CMat) -> Lu {
    let n = a.nrows();
    let mut lu = a.clone();
    let mut piv: Vec<usize> = (0..n).collect();
    let mut singular = false;
    for k in 0..n {
        let mut pmax = k;
        let mut vmax = lu[[k, k]].norm();
        for i in (k + 1)..n {
            let v = lu[[i, k]].norm();
            if v > vmax {
                vmax = v;
                pmax = i;
            }
        }
        if vmax == 0.0 {
            singular = true;
            continue;
        }
        if pmax != k {
            for j in 0..n {
                let tmp = lu[[k, j]];
                lu[[k, j]] = lu[[pmax, j]];
                lu[[pmax, j]] = tmp;
            }
            piv.swap(k, pmax);
        }
        let pivot = lu[[k, k]];
        for i in (k + 1)..n {
            let factor = lu[[i, k]] / pivot;
            lu[[i, k]] = factor;
            if factor != czero() {
                for j in (k + 1)..n {
                    let v = lu[[k, j]];
                    lu[[i, j]] -= factor * v;
                }
            }
        }
    }
    Lu { lu, piv, singular }
}

impl Lu {
    pub fn solve_vec(&self, b: &CVec) -> CVec {
        let n = self.lu.nrows();
        let mut x = Array1::from_elem(n, czero());
        for i in 0..n {
            x[i] = b[self.piv[i]];
        }
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[[i, j]];
                let xj = x[j];
                x[i] -= l * xj;
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let u = self.lu[[i, j]];
                let xj = x[j];
                x[i] -= u * xj;
            }
            x[i] /= self.lu[[i, i]];
        }
        x
    }

    pub fn solve_mat(&self, b: &CMat) -> CMat {
        let n = self.lu.nrows();
        let m = b.ncols();
        let mut out = Array2::from_elem((n, m), czero());
        for c in 0..m {
            let col = b.column(c).to_owned();
            let x = self.solve_vec(&col);
            for i in 0..n {
                out[[i, c]] = x[i];
            }
        }
        out
    }

    pub fn inverse(&self) -> CMat {
        let n = self.lu.nrows();
        self.solve_mat(&identity(n))
    }
}

/// Singular values by one-sided Jacobi (descending). Small singular values
/// come out with high relative accuracy, which the kernel-counting user
/// relies on.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    let mut m = a.clone();
    let (rows, cols) = (m.nrows(), m.ncols());
    if rows == 0 || cols == 0 {
        return Vec::new();
    }
    let max_sweeps = 60;
    let tol = 1e-28;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for i in 0..cols {
            for j in (i + 1)..cols {
                let mut alpha = 0.0f64;
                let mut beta = 0.0f64;
                let mut g = czero();
                for r in 0..rows {
                    let u = m[[r, i]];
                    let v = m[[r, j]];
                    alpha += u.norm_sqr();
                    beta += v.norm_sqr();
                    g += u.conj() * v;
                }
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                if g.norm_sqr() <= tol * alpha * beta {
                    continue;
                }
                let absg = g.norm();
                let phase = g / absg;
                let tau = (beta - alpha) / (2.0 * absg);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for r in 0..rows {
                    let u = m[[r, i]];
                    let v = m[[r, j]] * phase.conj();
                    m[[r, i]] = u * c - v * s;
                    m[[r, j]] = (u * s + v * c) * phase;
                }
                rotated = true;
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = (0..cols)
        .map(|j| {
            (0..rows)
                .map(|r| m[[r, j]].norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
    sv
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
/// Returns (eigenvalues ascending, V) with `a = V diag(vals) V^H`.
pub fn hermitian_eig(a: &CMat) -> (Array1<f64>, CMat) {
    let n = a.nrows();
    let mut m = a.clone();
    let mut v = identity(n);
    let max_sweeps = 60;
    for _ in 0..max_sweeps {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[[p, q]].norm_sqr();
            }
        }
        if off.sqrt() < 1e-13 * (frobenius(&m) + 1e-300) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = m[[p, q]];
                let absg = g.norm();
                if absg < 1e-300 {
                    continue;
                }
                let app = m[[p, p]].re;
                let aqq = m[[q, q]].re;
                let phase = g / absg;
                let tau = (aqq - app) / (2.0 * absg);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // Columns transform with J: col_p' = c col_p - s conj(phase) col_q,
                // col_q' = s phase col_p + c col_q; rows with J^H.
                for r in 0..n {
                    let mp = m[[r, p]];
                    let mq = m[[r, q]] * phase.conj();
                    m[[r, p]] = mp * c - mq * s;
                    m[[r, q]] = (mp * s + mq * c) * phase;
                }
                for cidx in 0..n {
                    let mp = m[[p, cidx]];
                    let mq = m[[q, cidx]] * phase;
                    m[[p, cidx]] = mp * c - mq * s;
                    m[[q, cidx]] = (mp * s + mq * c) * phase.conj();
                }
                for r in 0..n {
                    let vp = v[[r, p]];
                    let vq = v[[r, q]] * phase.conj();
                    v[[r, p]] = vp * c - vq * s;
                    v[[r, q]] = (vp * s + vq * c) * phase;
                }
            }
        }
    }
    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (m[[i, i]].re, i)).collect();
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let vals = Array1::from_iter(pairs.iter().map(|(x, _)| *x));
    let mut vs = Array2::from_elem((n, n), czero());
    for (newc, (_, oldc)) in pairs.iter().enumerate() {
        for r in 0..n {
            vs[[r, newc]] = v[[r, *oldc]];
        }
    }
    (vals, vs)
}

/// Matrix exponential by scaling and squaring with a Taylor tail.
pub fn expm(a: &CMat) -> CMat {
    let n = a.nrows();
    let norm = a
        .rows()
        .into_iter()
        .map(|r| r.iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0f64, f64::max);
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = scale(a, Complex64::new(1.0 / (2f64.powi(s as i32)), 0.0));
    let mut result = identity(n);
    let mut term = identity(n);
    for k in 1..64 {
        term = matmul(&term, &scaled);
        term = scale(&term, Complex64::new(1.0 / k as f64, 0.0));
        result = add(&result, &term);
        if frobenius(&term) < 1e-20 * frobenius(&result) {
            break;
        }
    }
    for _ in 0..s {
        result = matmul(&result, &result);
    }
    result
}

/// Hermitian square root via the eigendecomposition (for |A| of a
/// self-adjoint A, pass A^2 or use `hermitian_abs`).
pub fn hermitian_abs(a: &CMat) -> CMat {
    let (vals, v) = hermitian_eig(a);
    let n = a.nrows();
    let mut core = Array2::from_elem((n, n), czero());
    for i in 0..n {
        core[[i, i]] = Complex64::new(vals[i].abs(), 0.0);
    }
    matmul(&matmul(&v, &core), &adjoint(&v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rand_mat(n: usize, seed: u64) -> CMat {
        // Small deterministic congruential fill; adequate for smoke tests.
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        Array2::from_shape_fn((n, n), |_| Complex64::new(next(), next()))
    }

    #[test]
    fn lu_solves() {
        let a = rand_mat(12, 7);
        let lu = lu_factor(&a);
        let x = Array1::from_shape_fn(12, |i| Complex64::new(i as f64 + 0.5, -(i as f64)));
        let b = matvec(&a, &x);
        let got = lu.solve_vec(&b);
        let err: f64 = (0..12).map(|i| (got[i] - x[i]).norm()).sum();
        assert!(err < 1e-9, "err = {err}");
    }

    #[test]
    fn jacobi_svd_matches_gram_trace() {
        let a = rand_mat(10, 3);
        let sv = singular_values(&a);
        let frob2: f64 = a.iter().map(|x| x.norm_sqr()).sum();
        let sum2: f64 = sv.iter().map(|s| s * s).sum();
        assert!((frob2 - sum2).abs() < 1e-9 * frob2);
    }

    #[test]
    fn hermitian_eig_reconstructs() {
        let b = rand_mat(9, 11);
        let a = add(&b, &adjoint(&b));
        let (vals, v) = hermitian_eig(&a);
        let mut core = Array2::from_elem((9, 9), czero());
        for i in 0..9 {
            core[[i, i]] = Complex64::new(vals[i], 0.0);
        }
        let rec = matmul(&matmul(&v, &core), &adjoint(&v));
        assert!(frobenius(&sub(&rec, &a)) < 1e-9 * frobenius(&a));
        // V unitary
        let vhv = matmul(&adjoint(&v), &v);
        assert!(frobenius(&sub(&vhv, &identity(9))) < 1e-10);
    }

    #[test]
    fn expm_of_zero_is_identity() {
        let z = Array2::from_elem((5, 5), czero());
        assert!(frobenius(&sub(&expm(&z), &identity(5))) < 1e-14);
    }

    #[test]
    fn expm_inverse_property() {
        let b = rand_mat(8, 5);
        let h = scale(&add(&b, &adjoint(&b)), Complex64::new(0.2, 0.0));
        let e = expm(&h);
        let eneg = expm(&scale(&h, Complex64::new(-1.0, 0.0)));
        assert!(frobenius(&sub(&matmul(&e, &eneg), &identity(8))) < 1e-11);
    }
}
