//! Regularity probes: singular-value decay of the phase-smoothed
//! commutator, and boundedness of the twisted |D|-commutator under window
//! growth.

use crate::circle::ConformalModel;
use crate::linalg::{self, CMat};
use crate::triple::ModelTriple;

#[derive(Clone, Debug)]
pub struct DecayReport {
    pub singular_values: Vec<f64>,
    /// Fitted s with mu_j ~ C j^{-s}.
    pub decay_power: f64,
    /// Fitted p for membership in the weak ideal (mu_j ~ j^{-1/p}).
    pub fitted_exponent: f64,
    /// Whether the partial sums stay logarithmically bounded, i.e. the
    /// commutator sits in the weak trace ideal of the summability degree.
    pub weak_l1: bool,
    pub fit_points: usize,
}

/// Singular values of [D (D^2+1)^{-1/2}, a] on the inner window, with a
/// log-log decay fit.
pub fn lipschitz_probe(m: &ModelTriple, a: &CMat) -> DecayReport {
    let d2 = m.d2_diag();
    let smooth = match m.d_diag() {
        Some(d) => linalg::from_diag(&d.mapv(|x| x / (x * x + 1.0).sqrt())),
        None => {
            let dm = m.d_matrix();
            let scalev = d2.mapv(|x| 1.0 / (x + 1.0).sqrt());
            linalg::matmul(&dm, &linalg::from_diag(&scalev))
        }
    };
    let comm = linalg::sub(&linalg::matmul(&smooth, a), &linalg::matmul(a, &smooth));
    let inner = linalg::compress(&comm, m.inner_lo, m.inner_hi);
    let sv = linalg::singular_values(&inner);
    let nonzero: Vec<f64> = sv.iter().copied().filter(|&s| s > 1e-14).collect();
    // Fit log s_j against log (j+1) over the middle of the range.
    let lo = nonzero.len() / 8;
    let hi = (nonzero.len() * 3) / 4;
    let mut sx = 0.0;
    let mut sy = 0.0;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut count = 0.0;
    for j in lo..hi {
        let x = ((j + 1) as f64).ln();
        let y = nonzero[j].ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        count += 1.0;
    }
    let slope = if count > 1.0 {
        (count * sxy - sx * sy) / (count * sxx - sx * sx)
    } else {
        0.0
    };
    let decay_power = -slope;
    let fitted = if slope < 0.0 { -1.0 / slope } else { f64::INFINITY };
    // Logarithmic bound on partial sums: sum_{j<=N} mu_j <= C (1 + ln N)
    // with a fixed C read off from the largest value.
    let mut partial = 0.0f64;
    let c0 = nonzero.first().copied().unwrap_or(0.0).max(1e-300);
    let mut weak_l1 = true;
    for (j, s) in nonzero.iter().enumerate() {
        partial += s;
        if partial > 4.0 * c0 * (2.0 + (j as f64 + 1.0).ln()) {
            weak_l1 = false;
            break;
        }
    }
    DecayReport {
        singular_values: nonzero,
        decay_power,
        fitted_exponent: fitted,
        weak_l1,
        fit_points: (hi - lo).max(0),
    }
}

/// Operator norm of the twisted |D_h|-commutator `|D_h| a - sigma_h(a) |D_h|`.
pub fn twisted_lipschitz_norm(c: &ConformalModel, a: &CMat) -> f64 {
    let abs_dh = linalg::hermitian_abs(&c.d_h);
    let lhs = linalg::matmul(&abs_dh, a);
    let rhs = linalg::matmul(&c.sigma_h(a), &abs_dh);
    c.base.inner_norm(&linalg::sub(&lhs, &rhs))
}
