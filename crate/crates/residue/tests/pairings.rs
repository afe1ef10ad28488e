//! Residue anchors, index computations and pairings against brute-force
//! and cross-module oracles.

use models::linalg::{self, CMat};
use models::{build_circle, build_scaling, circle_shift, circle_trig_poly};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use residue::{
    chern_phase, family_pairing, fredholm_index, gimel_circle, homotopy_pairing_scan,
    residue_circle_exact, residue_circle_limit, residue_scaling, two_sided_lattice, zeta_circle,
    zeta_scaling, BandPoly, CircleSymbol,
};

#[test]
fn lattice_zeta_value_matches_brute_force() {
    // Full two-sided sum of |n+1/2|^{-2} is pi^2 (each half-line pi^2/2).
    let v = two_sided_lattice(Complex64::new(2.0, 0.0));
    let brute: f64 = (-300000i64..300000)
        .map(|n| (n as f64 + 0.5).abs().powi(-2))
        .sum();
    assert!((v.re - std::f64::consts::PI.powi(2)).abs() < 1e-10);
    assert!((v.re - brute).abs() < 1e-5);
}

#[test]
fn zeta_evaluator_reaches_closed_form() {
    let m = build_circle(64, 1.0).unwrap();
    let p = m.abs_d_pow(0.0); // identity
    let class = CircleSymbol::abs_d_power(0.0);
    let v = zeta_circle(&m, &p, &class, Complex64::new(2.0, 0.0)).unwrap();
    assert!((v.re - std::f64::consts::PI.powi(2)).abs() < 1e-10);
    // off-diagonal symbol: zero
    let u = m.algebra["u"].clone();
    let z = zeta_circle(&m, &u, &CircleSymbol { terms: vec![] }, Complex64::new(3.0, 0.0))
        .unwrap();
    assert!(z.norm() < 1e-14);
}

#[test]
fn residue_of_inverse_modulus_is_one() {
    let m = build_circle(64, 1.0).unwrap();
    let class = CircleSymbol::abs_d_power(1.0);
    let exact = residue_circle_exact(&class);
    assert!((exact.re - 1.0).abs() < 1e-14);
    let p = m.abs_d_pow(-1.0);
    let limit = residue_circle_limit(&m, &p, &class).unwrap();
    assert!(
        (limit.re - 1.0).abs() < 1e-8,
        "numerical limit {} should be 1",
        limit.re
    );
}

#[test]
fn residue_of_function_times_inverse_modulus_is_mean() {
    let m = build_circle(64, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let mean = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let c1 = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let f = circle_trig_poly(
            m.outer_dim,
            &[(0, mean), (1, c1), (-1, c1.conj()), (2, c1 * 0.3)],
        );
        let p = linalg::matmul(&f, &m.abs_d_pow(-1.0));
        let class = CircleSymbol::scaled(1.0, mean);
        let exact = residue_circle_exact(&class);
        assert!((exact - mean).norm() < 1e-14);
        let limit = residue_circle_limit(&m, &p, &class).unwrap();
        assert!(
            (limit - mean).norm() < 1e-8,
            "limit {} vs mean {}",
            limit,
            mean
        );
    }
}

#[test]
fn scaling_model_zeta_is_entire_and_residue_free() {
    let m = build_scaling(-10, 10, 2.0).unwrap();
    let f = m
        .scaling_function(&[(0, Complex64::new(1.0, 0.0))])
        .unwrap();
    // spot value at z = 1: single delta at exponent 0 gives mu^0 = 1
    let v = zeta_scaling(&m, &f, Complex64::new(1.0, 0.0));
    assert!((v.re - 1.0).abs() < 1e-14);
    assert_eq!(residue_scaling(&m, &f), Complex64::new(0.0, 0.0));
    // f U^m is strictly off-diagonal: zeta identically zero
    let u = m.scaling_unitary_pow(1).unwrap();
    let fu = linalg::matmul(&f, &u.mat);
    let z = zeta_scaling(&m, &fu, Complex64::new(1.7, 0.3));
    assert!(z.norm() < 1e-14);
}

#[test]
fn phase_pairing_of_winding_one_is_four() {
    for cutoff in [4i64, 8, 64] {
        let m = build_circle(cutoff, 1.0).unwrap();
        let v = chern_phase(&m, &[m.algebra["u*"].clone(), m.algebra["u"].clone()]).unwrap();
        assert!(
            (v.re - 4.0).abs() < 1e-12 && v.im.abs() < 1e-12,
            "cutoff {}: {}",
            cutoff,
            v
        );
        // opposite orientation
        let w = chern_phase(&m, &[m.algebra["u"].clone(), m.algebra["u*"].clone()]).unwrap();
        assert!((w.re + 4.0).abs() < 1e-12);
    }
}

#[test]
fn fredholm_indices_match_winding() {
    let m = build_circle(16, 1.0).unwrap();
    for k in [-2i64, -1, 1, 2] {
        let u = circle_shift(m.outer_dim, k);
        let (index, diag) = fredholm_index(&m, &u).unwrap();
        assert_eq!(index, -k, "winding {k}: diagnostics {:?}", diag);
    }
    // identity has index zero
    let (i0, _) = fredholm_index(&m, &linalg::identity(m.outer_dim)).unwrap();
    assert_eq!(i0, 0);
}

#[test]
fn pairing_to_index_ratio_is_constant() {
    let m = build_circle(24, 1.0).unwrap();
    let mut ratios: Vec<f64> = Vec::new();
    for k in [-2i64, -1, 1, 2] {
        let u = circle_shift(m.outer_dim, k);
        let u_star = circle_shift(m.outer_dim, -k);
        let pairing = chern_phase(&m, &[u_star, u.clone()]).unwrap();
        let (index, _) = fredholm_index(&m, &u).unwrap();
        ratios.push(pairing.re / index as f64);
    }
    for r in &ratios {
        assert!((r - ratios[0]).abs() < 1e-10, "ratios {:?}", ratios);
    }
    assert!((ratios[0] + 4.0).abs() < 1e-10);
}

#[test]
fn gimel_cross_validates_heat_extraction() {
    // The exact residue value sqrt(pi) against the finite-part extraction
    // of the bracket with the same inputs.
    let m = build_circle(96, 1.0).unwrap();
    let u_star_entry = jlo::BracketEntry::plain(m.algebra["u*"].clone());
    let comm = jlo::commutator_entry(&m, &jlo::BracketEntry::plain(m.algebra["u"].clone()));
    let grid: Vec<f64> = (0..24).map(|i| 3e-3 * 1.18f64.powi(i)).collect();
    let (c0, _) =
        jlo::extract_constant_term(&m, &[u_star_entry, comm], &grid, &[1.0, 2.0], 1).unwrap();
    let exact = gimel_circle(1, &[BandPoly::shift(-1), BandPoly::shift(1)], 2);
    let rel = (c0.re - exact.to_f64()).abs() / exact.to_f64();
    assert!(rel < 1e-3, "relative deviation {rel}");
    // dressed value carries the sqrt(2i) normalization
    let dressed = exact.dressed();
    assert!((dressed.re - exact.to_f64()).abs() < 1e-14);
    assert!((dressed.im - exact.to_f64()).abs() < 1e-14);
}

#[test]
fn homotopy_scan_is_flat_and_ends_at_phase() {
    let m = build_circle(64, 0.6).unwrap();
    let a0 = m.algebra["u*"].clone();
    let a1 = m.algebra["u"].clone();
    let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
    let (vals, dev) = homotopy_pairing_scan(&m, &a0, &a1, &grid);
    assert!(dev < 1e-4, "deviation {dev}; values {:?}", vals);
    let phase = chern_phase(&m, &[a0.clone(), a1.clone()]).unwrap();
    let end = family_pairing(&m, &a0, &a1, 1.0);
    assert!(
        (end - phase).norm() < 1e-10,
        "endpoint {} vs phase {}",
        end,
        phase
    );
    // trivial input pairs to zero along the whole family
    let id = linalg::identity(m.outer_dim);
    for &u in &grid {
        assert!(family_pairing(&m, &id, &id, u).norm() < 1e-14);
    }
}

#[test]
fn conformal_character_equality() {
    let base = build_circle(48, 0.5).unwrap();
    let h = models::CirclePerturbation::cosine(0.3);
    let c = models::conformal_perturb(&base, &h).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..3 {
        let coeffs: Vec<(i64, Complex64)> = (1..=2)
            .map(|k| {
                (
                    k,
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                )
            })
            .collect();
        let mut full = vec![(0, Complex64::new(rng.gen_range(-1.0..1.0), 0.0))];
        for &(k, v) in &coeffs {
            full.push((k, v));
            full.push((-k, v.conj()));
        }
        let a0: CMat = circle_trig_poly(base.outer_dim, &full);
        let a1 = circle_shift(base.outer_dim, 1);
        let (tw, untw) = residue::conformal_character_pair(&c, &[a0, a1]);
        let rel = (tw - untw).norm() / untw.norm().max(1e-300);
        assert!(rel < 1e-6, "twisted {} vs untwisted {} (rel {rel})", tw, untw);
    }
}

#[test]
fn gamma_weighted_residue_matches_heat_constant_term() {
    // tau0 on the graded double with a = I (x) e1: closed form against the
    // epsilon-constant coefficient of the heat trace.
    let base = build_circle(48, 1.0).unwrap();
    let g = models::graded_double(&base).unwrap();
    let class = CircleSymbol::abs_d_power(0.0);
    let closed = residue::gamma_weighted_residue(&class);
    // heat route: Tr(a e^{-eps D^2}) with a = block(1, 0): diag over the
    // first block only.
    let d2 = g.d2_diag();
    let n = base.outer_dim;
    let diag = ndarray::Array1::from_shape_fn(g.outer_dim, |i| {
        if i < n {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let grid: Vec<f64> = (0..18).map(|i| 2e-2 * 1.2f64.powi(i)).collect();
    let values: Vec<Complex64> = grid
        .iter()
        .map(|&e| residue::heat_trace(&d2, &diag, e))
        .collect();
    let (c0, _) = jlo::fit_constant_term(&grid, &values, &[-0.5]).unwrap();
    assert!(
        (closed - c0).norm() < 1e-6 * (1.0 + closed.norm()),
        "closed {} vs heat {}",
        closed,
        c0
    );
}
