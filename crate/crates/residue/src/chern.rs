//! Character pairings and the index: the phase cocycle, the twisted
//! resolvent cocycle on the conformal circle, kernel-counting Fredholm
//! indices, and the operator-family pairing scan.

use num_complex::Complex64;

use models::linalg::{self, CMat};
use models::{ConformalModel, ModelTriple};

use crate::functional::ResidueError;
use crate::zeta::hurwitz_tail;

/// Trace over the inner window plus analytic tails, for circle operators
/// whose diagonal decays like a combination of x^{-2}, x^{-3}, x^{-4}
/// (x = |n + 1/2|). The tail weights are fitted on the outer half of the
/// inner window, separately on each half-line.
pub fn tail_corrected_trace(m: &ModelTriple, x: &CMat) -> Complex64 {
    let d = m.d_diag().expect("diagonal model");
    let n = m.outer_dim;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in m.inner_lo..m.inner_hi {
        acc += x[[i, i]];
    }
    // Fit c2/x^2 + c3/x^3 + c4/x^4 on each side's annulus.
    for side in 0..2 {
        let annulus: Vec<usize> = (m.inner_lo..m.inner_hi)
            .filter(|&i| {
                let pos = d[i] > 0.0;
                if side == 0 { pos } else { !pos }
            })
            .collect();
        if annulus.len() < 8 {
            continue;
        }
        let boundary = if side == 0 {
            annulus.iter().map(|&i| d[i].abs()).fold(0.0, f64::max)
        } else {
            annulus.iter().map(|&i| d[i].abs()).fold(0.0, f64::max)
        };
        let fit_pts: Vec<usize> = annulus
            .iter()
            .copied()
            .filter(|&i| d[i].abs() > boundary * 0.55)
            .collect();
        if fit_pts.len() < 4 {
            continue;
        }
        // least squares for [x^-2, x^-3, x^-4]
        let k = 3;
        let mut ata = [[0.0f64; 3]; 3];
        let mut atb_re = [0.0f64; 3];
        let mut atb_im = [0.0f64; 3];
        for &i in &fit_pts {
            let xi = d[i].abs();
            let basis = [xi.powi(-2), xi.powi(-3), xi.powi(-4)];
            for a in 0..k {
                for b in 0..k {
                    ata[a][b] += basis[a] * basis[b];
                }
                atb_re[a] += basis[a] * x[[i, i]].re;
                atb_im[a] += basis[a] * x[[i, i]].im;
            }
        }
        if let Some(inv) = invert3(&ata) {
            let mut c_re = [0.0f64; 3];
            let mut c_im = [0.0f64; 3];
            for a in 0..k {
                for b in 0..k {
                    c_re[a] += inv[a][b] * atb_re[b];
                    c_im[a] += inv[a][b] * atb_im[b];
                }
            }
            // Add sum over the lattice beyond the window boundary.
            let start = boundary + 1.0;
            for (p, pw) in [(0usize, 2.0), (1, 3.0), (2, 4.0)] {
                let tail = hurwitz_tail(pw, start);
                acc += Complex64::new(c_re[p] * tail, c_im[p] * tail);
            }
        }
    }
    let _ = n;
    acc
}

fn invert3(m: &[[f64; 3]; 3]) -> Option<[[f64; 3]; 3]> {
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if det.abs() < 1e-300 {
        return None;
    }
    let inv_det = 1.0 / det;
    let mut out = [[0.0f64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let a = m[(i + 1) % 3][(j + 1) % 3] * m[(i + 2) % 3][(j + 2) % 3]
                - m[(i + 1) % 3][(j + 2) % 3] * m[(i + 2) % 3][(j + 1) % 3];
            out[j][i] = a * inv_det;
        }
    }
    Some(out)
}

/// Phase-mode pairing `Tr(F [F,a_0] .. [F,a_p])`; exact for banded inputs
/// since the commutators have finite rank.
pub fn chern_phase(m: &ModelTriple, inputs: &[CMat]) -> Result<Complex64, ResidueError> {
    let f = m.phase();
    let mut prod = f.clone();
    for a in inputs {
        let comm = linalg::sub(&linalg::matmul(&f, a), &linalg::matmul(a, &f));
        prod = linalg::matmul(&prod, &comm);
    }
    trace_like_guard(m, &prod)?;
    Ok(linalg::trace(&prod))
}

/// Rejects products whose diagonal mass sits on the truncation collar.
fn trace_like_guard(m: &ModelTriple, x: &CMat) -> Result<(), ResidueError> {
    let mut inner = 0.0f64;
    let mut collar = 0.0f64;
    for i in 0..m.outer_dim {
        let v = x[[i, i]].norm();
        if i >= m.inner_lo && i < m.inner_hi {
            inner += v;
        } else {
            collar += v;
        }
    }
    let total = inner + collar;
    if total > 1e-12 && collar / total > 0.5 {
        return Err(ResidueError::NotTraceLike(collar / total));
    }
    Ok(())
}

/// Twisted-versus-untwisted resolvent pairing on the conformal circle.
/// In the truncation the conjugation identity is an exact matrix identity,
/// so the two products are exactly conjugate and the full-window traces
/// agree to rounding.
pub fn conformal_character_pair(
    c: &ConformalModel,
    inputs: &[CMat],
) -> (Complex64, Complex64) {
    assert!(!inputs.is_empty());
    let tw: Vec<CMat> = inputs.iter().map(|a| c.resolvent_commutator(a)).collect();
    let un: Vec<CMat> = inputs.iter().map(|a| c.untwisted_counterpart(a)).collect();
    let fold = |parts: &[CMat]| -> Complex64 {
        if parts.len() == 1 {
            return linalg::trace(&parts[0]);
        }
        let mut acc = parts[0].clone();
        for p in &parts[1..parts.len() - 1] {
            acc = linalg::matmul(&acc, p);
        }
        linalg::trace_of_product(&acc, &parts[parts.len() - 1])
    };
    (fold(&tw), fold(&un))
}

#[derive(Clone, Debug)]
pub struct IndexDiagnostics {
    pub kernel_dim: usize,
    pub cokernel_dim: usize,
    pub smallest_kept: f64,
    pub largest_dropped: f64,
}

/// Fredholm index of the positive-frequency compression of a unitary:
/// kernel and cokernel counted by eigenvectors of the squared compression
/// below threshold, excluding vectors whose mass sits on the truncation
/// collar (the top of the positive window).
pub fn fredholm_index(m: &ModelTriple, u: &CMat) -> Result<(i64, IndexDiagnostics), ResidueError> {
    let d = m.d_diag().expect("diagonal model");
    let pos: Vec<usize> = (0..m.outer_dim).filter(|&i| d[i] > 0.0).collect();
    let np = pos.len();
    let mut w = ndarray::Array2::from_elem((np, np), Complex64::new(0.0, 0.0));
    for (r, &i) in pos.iter().enumerate() {
        for (c, &j) in pos.iter().enumerate() {
            w[[r, c]] = u[[i, j]];
        }
    }
    let thr = 1e-8;
    let count = |mat: &CMat| -> (usize, f64, f64) {
        let gram = linalg::matmul(&linalg::adjoint(mat), mat);
        let (vals, vecs) = linalg::hermitian_eig(&gram);
        let mut dim = 0usize;
        let mut smallest_kept = f64::INFINITY;
        let mut largest_dropped: f64 = 0.0;
        let collar_start = (np * 7) / 8;
        for idx in 0..np {
            let sv = vals[idx].max(0.0).sqrt();
            if sv < thr {
                // exclude truncation pseudo-kernel vectors at the collar
                let mut collar_mass = 0.0;
                let mut total = 0.0;
                for r in 0..np {
                    let m2 = vecs[[r, idx]].norm_sqr();
                    total += m2;
                    if r >= collar_start {
                        collar_mass += m2;
                    }
                }
                if collar_mass / total.max(1e-300) < 0.5 {
                    dim += 1;
                    largest_dropped = largest_dropped.max(sv);
                }
            } else {
                smallest_kept = smallest_kept.min(sv);
            }
        }
        (dim, smallest_kept, largest_dropped)
    };
    let (ker, kept1, drop1) = count(&w);
    let wh = linalg::adjoint(&w);
    let (coker, kept2, drop2) = count(&wh);
    let smallest_kept = kept1.min(kept2);
    let largest_dropped = drop1.max(drop2);
    if smallest_kept < 100.0 * thr && smallest_kept < f64::INFINITY {
        return Err(ResidueError::IllSeparated(largest_dropped, smallest_kept));
    }
    Ok((
        ker as i64 - coker as i64,
        IndexDiagnostics {
            kernel_dim: ker,
            cokernel_dim: coker,
            smallest_kept,
            largest_dropped,
        },
    ))
}

/// Family pairing for the scan: the resolvent cocycle along
/// `D_u = D |D|^{-u}` with the odd-case phase convention, normalized so
/// that the endpoint u = 1 is literally the phase pairing.
pub fn family_pairing(m: &ModelTriple, a0: &CMat, a1: &CMat, u: f64) -> Complex64 {
    let d = m.d_diag().expect("diagonal model");
    let du = d.mapv(|x| x * x.abs().powf(-u));
    let du_mat = linalg::from_diag(&du);
    let du_inv = linalg::from_diag(&du.mapv(|x| 1.0 / x));
    let f = m.phase();
    let comm = |a: &CMat| -> CMat {
        linalg::sub(&linalg::matmul(&du_mat, a), &linalg::matmul(a, &du_mat))
    };
    let x0 = linalg::matmul(&du_inv, &comm(a0));
    let x1 = linalg::matmul(&du_inv, &comm(a1));
    let prod = linalg::matmul(&linalg::matmul(&f, &x0), &x1);
    -tail_corrected_trace(m, &prod)
}

/// Pairing scan across the family, reporting values and the deviation from
/// constancy.
pub fn homotopy_pairing_scan(
    m: &ModelTriple,
    a0: &CMat,
    a1: &CMat,
    grid: &[f64],
) -> (Vec<(f64, Complex64)>, f64) {
    let vals: Vec<(f64, Complex64)> = grid
        .iter()
        .map(|&u| (u, family_pairing(m, a0, a1, u)))
        .collect();
    let mean: Complex64 =
        vals.iter().map(|(_, v)| *v).sum::<Complex64>() / Complex64::new(vals.len() as f64, 0.0);
    let dev = vals
        .iter()
        .map(|(_, v)| (*v - mean).norm())
        .fold(0.0, f64::max)
        / mean.norm().max(1e-300);
    (vals, dev)
}
