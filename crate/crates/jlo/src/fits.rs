//! Finite-part extraction: least-squares fit of bracket values on an
//! epsilon grid against a principled power/log basis read off the model's
//! pole locations.

use num_complex::Complex64;

use crate::bracket::JloError;

#[derive(Clone, Debug)]
pub struct FitDiagnostics {
    pub condition: f64,
    pub residual: f64,
    /// Largest fitted magnitude among the log-basis coefficients.
    pub log_coefficient: f64,
    pub basis: Vec<String>,
}

/// Basis element: eps^power, optionally times log(eps).
#[derive(Clone, Debug)]
struct BasisFn {
    power: f64,
    log: bool,
}

impl BasisFn {
    fn eval(&self, eps: f64) -> f64 {
        let v = eps.powf(self.power);
        if self.log {
            v * eps.ln()
        } else {
            v
        }
    }

    fn label(&self) -> String {
        if self.log {
            format!("eps^{:.3}*log", self.power)
        } else {
            format!("eps^{:.3}", self.power)
        }
    }
}

/// Fits `values[i] ~ sum_j c_j basis_j(grid[i])` and returns the
/// coefficient of the constant element together with diagnostics.
///
/// `powers` are the non-constant exponents of the expansion (from the
/// model's pole bookkeeping); each gets a log partner. The constant element
/// is always present. Ill-conditioned normal equations are an error.
pub fn fit_constant_term(
    grid: &[f64],
    values: &[Complex64],
    powers: &[f64],
) -> Result<(Complex64, FitDiagnostics), JloError> {
    assert_eq!(grid.len(), values.len());
    let mut basis: Vec<BasisFn> = vec![BasisFn {
        power: 0.0,
        log: false,
    }];
    for &p in powers {
        if p.abs() < 1e-12 {
            // a pole at the constant order would contribute log eps
            basis.push(BasisFn {
                power: 0.0,
                log: true,
            });
            continue;
        }
        basis.push(BasisFn { power: p, log: false });
        basis.push(BasisFn { power: p, log: true });
    }
    let k = basis.len();
    let n = grid.len();
    if n < k {
        return Err(JloError::DegenerateBasis);
    }

    // Column-equilibrated design matrix.
    let mut design = vec![0.0f64; n * k];
    for (i, &eps) in grid.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            design[i * k + j] = b.eval(eps);
        }
    }
    let mut col_norm = vec![0.0f64; k];
    for j in 0..k {
        let s: f64 = (0..n).map(|i| design[i * k + j].powi(2)).sum();
        col_norm[j] = s.sqrt().max(1e-300);
        for i in 0..n {
            design[i * k + j] /= col_norm[j];
        }
    }

    // Normal equations.
    let mut normal = vec![0.0f64; k * k];
    for a in 0..k {
        for b in 0..k {
            let mut s = 0.0;
            for i in 0..n {
                s += design[i * k + a] * design[i * k + b];
            }
            normal[a * k + b] = s;
        }
    }
    let inv = invert_small(&normal, k).ok_or(JloError::DegenerateBasis)?;
    let cond = one_norm(&normal, k) * one_norm(&inv, k);
    if cond > 1e12 {
        return Err(JloError::IllConditioned(cond));
    }

    let mut rhs_re = vec![0.0f64; k];
    let mut rhs_im = vec![0.0f64; k];
    for j in 0..k {
        for i in 0..n {
            rhs_re[j] += design[i * k + j] * values[i].re;
            rhs_im[j] += design[i * k + j] * values[i].im;
        }
    }
    let apply = |m: &[f64], v: &[f64]| -> Vec<f64> {
        (0..k)
            .map(|a| (0..k).map(|b| m[a * k + b] * v[b]).sum())
            .collect()
    };
    let coef_re = apply(&inv, &rhs_re);
    let coef_im = apply(&inv, &rhs_im);

    // Residual in the fitted (scaled) coordinates.
    let mut resid = 0.0f64;
    for i in 0..n {
        let mut pred_re = 0.0;
        let mut pred_im = 0.0;
        for j in 0..k {
            pred_re += design[i * k + j] * coef_re[j];
            pred_im += design[i * k + j] * coef_im[j];
        }
        resid += (pred_re - values[i].re).powi(2) + (pred_im - values[i].im).powi(2);
    }
    resid = resid.sqrt();

    // Unscale.
    let coeffs: Vec<Complex64> = (0..k)
        .map(|j| Complex64::new(coef_re[j] / col_norm[j], coef_im[j] / col_norm[j]))
        .collect();
    let log_coefficient = basis
        .iter()
        .zip(coeffs.iter())
        .filter(|(b, _)| b.log)
        .map(|(_, c)| c.norm())
        .fold(0.0f64, f64::max);
    let diag = FitDiagnostics {
        condition: cond,
        residual: resid,
        log_coefficient,
        basis: basis.iter().map(|b| b.label()).collect(),
    };
    Ok((coeffs[0], diag))
}

fn invert_small(m: &[f64], k: usize) -> Option<Vec<f64>> {
    let mut a = m.to_vec();
    let mut inv = vec![0.0f64; k * k];
    for i in 0..k {
        inv[i * k + i] = 1.0;
    }
    for col in 0..k {
        let mut pivot_row = col;
        let mut best = a[col * k + col].abs();
        for r in (col + 1)..k {
            if a[r * k + col].abs() > best {
                best = a[r * k + col].abs();
                pivot_row = r;
            }
        }
        if best == 0.0 {
            return None;
        }
        if pivot_row != col {
            for j in 0..k {
                a.swap(col * k + j, pivot_row * k + j);
                inv.swap(col * k + j, pivot_row * k + j);
            }
        }
        let p = a[col * k + col];
        for j in 0..k {
            a[col * k + j] /= p;
            inv[col * k + j] /= p;
        }
        for r in 0..k {
            if r == col {
                continue;
            }
            let f = a[r * k + col];
            if f != 0.0 {
                for j in 0..k {
                    a[r * k + j] -= f * a[col * k + j];
                    inv[r * k + j] -= f * inv[col * k + j];
                }
            }
        }
    }
    Some(inv)
}

fn one_norm(m: &[f64], k: usize) -> f64 {
    (0..k)
        .map(|j| (0..k).map(|i| m[i * k + j].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_data_recovers_exactly() {
        let grid: Vec<f64> = (0..12).map(|i| 0.01 * 1.5f64.powi(i)).collect();
        let values: Vec<Complex64> = grid.iter().map(|_| Complex64::new(2.5, -0.5)).collect();
        let (c0, d) = fit_constant_term(&grid, &values, &[1.0, 2.0]).unwrap();
        assert!((c0 - Complex64::new(2.5, -0.5)).norm() < 1e-10);
        assert!(d.residual < 1e-10);
    }

    #[test]
    fn synthetic_divergent_signal_recovered() {
        // c eps^{-1/2} + c0: recover c0 to 1e-8.
        let grid: Vec<f64> = (0..16).map(|i| 0.003 * 1.45f64.powi(i)).collect();
        let c = 3.7;
        let c0 = -1.234567;
        let values: Vec<Complex64> = grid
            .iter()
            .map(|&e| Complex64::new(c * e.powf(-0.5) + c0, 0.0))
            .collect();
        let (got, _) = fit_constant_term(&grid, &values, &[-0.5]).unwrap();
        assert!((got.re - c0).abs() < 1e-8, "got {}", got.re);
    }

    #[test]
    fn degenerate_grid_rejected() {
        let grid = vec![0.1, 0.1, 0.1];
        let values = vec![Complex64::new(1.0, 0.0); 3];
        assert!(fit_constant_term(&grid, &values, &[1.0, 2.0, 3.0]).is_err());
    }
}
