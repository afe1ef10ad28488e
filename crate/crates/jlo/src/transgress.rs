//! Scale integrals of the contraction cochain: composite Simpson in the
//! logarithmic scale variable with Gaussian-decay truncation above, and a
//! finite part at the lower cutoff.

use num_complex::Complex64;

use models::ModelTriple;

use crate::bracket::{BracketEntry, JloError};
use crate::fits::{fit_constant_term, FitDiagnostics};
use crate::lemmas::{jbar_cochain, Family};

#[derive(Clone, Debug)]
pub struct TailDiagnostics {
    pub upper_cutoff: f64,
    pub samples: usize,
    pub fit: FitDiagnostics,
}

/// Composite Simpson of `g(t) dt` over [lo, hi] in x = ln t.
fn simpson_log<F>(g: &mut F, lo: f64, hi: f64, intervals: usize) -> Result<Complex64, JloError>
where
    F: FnMut(f64) -> Result<Complex64, JloError>,
{
    let n = intervals.max(2) & !1usize; // even
    let x0 = lo.ln();
    let dx = (hi.ln() - x0) / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..=n {
        let t = (x0 + dx * j as f64).exp();
        let w = if j == 0 || j == n {
            1.0
        } else if j % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += g(t)? * (w * t);
    }
    Ok(acc * (dx / 3.0))
}

/// Finite part at the lower cutoff of `int_cut^infinity Jbar(tD, D) dt`:
/// the upper range is integrated until Gaussian decay kills the integrand;
/// the dependence on the moving cutoff is fitted against the supplied
/// divergence powers (with log partners) and the constant is returned.
pub fn transgress(
    m: &ModelTriple,
    slots: &[BracketEntry],
    eps_cut: f64,
    divergence_powers: &[f64],
) -> Result<(Complex64, TailDiagnostics), JloError> {
    if !(eps_cut > 0.0) {
        return Err(JloError::NonPositiveEpsilon(eps_cut));
    }
    if m.min_abs_d() <= 0.0 {
        return Err(JloError::BadFamilyParameter(0.0));
    }
    let mut integrand =
        |t: f64| -> Result<Complex64, JloError> { jbar_cochain(m, slots, Family::Scale, t, true) };
    let mut samples = 0usize;

    // Upper part: from 4 * eps_cut upward in octaves until three quiet
    // octaves in a row (or a hard ceiling).
    let t_mid = 4.0 * eps_cut;
    let mut upper = Complex64::new(0.0, 0.0);
    let mut t = t_mid;
    let mut scale_seen = 0.0f64;
    let mut quiet = 0;
    let upper_cutoff = loop {
        let t_next = 2.0 * t;
        let piece = simpson_log(&mut integrand, t, t_next, 16)?;
        samples += 17;
        upper += piece;
        scale_seen = scale_seen.max(piece.norm());
        if piece.norm() < 1e-14 * (scale_seen + 1e-300) {
            quiet += 1;
            if quiet >= 3 {
                break t_next;
            }
        } else {
            quiet = 0;
        }
        if t_next > 1e4 {
            break t_next;
        }
        t = t_next;
    };

    // Lower part: F(cut) = int_cut^{t_mid} + upper, on a grid of cutoffs in
    // [eps_cut, 4 eps_cut]; fit and drop the divergent basis.
    let n_grid = (2 * divergence_powers.len() + 8).max(10);
    let mut cuts: Vec<f64> = (0..n_grid)
        .map(|i| eps_cut * 4f64.powf(i as f64 / (n_grid as f64 - 1.0)))
        .collect();
    cuts.reverse();
    let mut values_rev: Vec<Complex64> = Vec::with_capacity(n_grid);
    let mut partial = upper;
    let mut t_hi = t_mid;
    for &cut in &cuts {
        if cut < t_hi {
            partial += simpson_log(&mut integrand, cut, t_hi, 16)?;
            samples += 17;
        }
        t_hi = cut;
        values_rev.push(partial);
    }
    let grid: Vec<f64> = cuts.iter().rev().copied().collect();
    let values: Vec<Complex64> = values_rev.into_iter().rev().collect();
    let (c0, fit) = fit_constant_term(&grid, &values, divergence_powers)?;
    Ok((
        c0,
        TailDiagnostics {
            upper_cutoff,
            samples,
            fit,
        },
    ))
}
