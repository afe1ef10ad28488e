//! Zeta evaluation: the Riemann zeta on the complex plane by
//! Euler-Maclaurin, half-integer lattice sums, and real Hurwitz tails.

use num_complex::Complex64;

/// Bernoulli numbers B_2 .. B_16.
const BERNOULLI_EVEN: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// Riemann zeta by Euler-Maclaurin, accurate to ~1e-12 for Re s >= -4,
/// away from the pole at s = 1.
pub fn riemann_zeta(s: Complex64) -> Complex64 {
    let n = 24usize;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..n {
        sum += (-s * (k as f64).ln()).exp();
    }
    let nf = n as f64;
    let npow = |e: Complex64| (e * nf.ln()).exp();
    sum += npow(-s + 1.0) / (s - 1.0);
    sum += 0.5 * npow(-s);
    // correction terms B_{2j}/(2j)! * s(s+1)..(s+2j-2) * n^{-s-2j+1}
    let mut rising = s;
    let mut fact = 1.0f64;
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let two_j = 2 * (j + 1);
        fact *= (two_j - 1) as f64 * if two_j >= 2 { (two_j) as f64 } else { 1.0 };
        // rising = s(s+1)...(s+2j-2), built incrementally
        if j > 0 {
            rising *= (s + (two_j as f64 - 3.0)) * (s + (two_j as f64 - 2.0));
        }
        sum += rising * (*b / fact) * npow(-s - (two_j as f64 - 1.0));
    }
    sum
}

/// `sum_{n>=0} (n+1/2)^{-s} = (2^s - 1) zeta(s)`, the half-integer lattice
/// sum; simple pole at s = 1 with residue 1.
pub fn half_lattice_sum(s: Complex64) -> Complex64 {
    let two_pow = (s * 2f64.ln()).exp();
    (two_pow - 1.0) * riemann_zeta(s)
}

/// Residue at s = 1 of the half-integer lattice sum (it equals 1), kept as
/// a named constant for the pole bookkeeping.
pub const HALF_LATTICE_RESIDUE: f64 = 1.0;

/// Real Hurwitz tail `sum_{k>=0} (a + k)^{-s}` for s > 1, a > 0, by
/// Euler-Maclaurin.
pub fn hurwitz_tail(s: f64, a: f64) -> f64 {
    let n = 16usize;
    let mut sum = 0.0f64;
    for k in 0..n {
        sum += (a + k as f64).powf(-s);
    }
    let m = a + n as f64;
    sum += m.powf(1.0 - s) / (s - 1.0);
    sum += 0.5 * m.powf(-s);
    let mut rising = s;
    let mut fact = 1.0f64;
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let two_j = 2 * (j + 1);
        fact *= (two_j - 1) as f64 * two_j as f64;
        if j > 0 {
            rising *= (s + (two_j as f64 - 3.0)) * (s + (two_j as f64 - 2.0));
        }
        sum += rising * (*b / fact) * m.powf(-s - (two_j as f64 - 1.0));
    }
    sum
}
