//! Bracket identities and asymptotics against independent oracles.

use jlo::{
    b_of_j, big_b_of_j, check_derivative_identity, check_merge_unmerge,
    check_rotation_rescaling, check_unit_insertion, commutator_entry, eval_bracket,
    extract_constant_term, j_cochain_at, j_entries, BracketEntry, Family,
};
use models::linalg::{self, CMat};
use models::{build_circle, build_scaling, graded_double};
use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_banded(n: usize, band: usize, rng: &mut ChaCha8Rng) -> CMat {
    Array2::from_shape_fn((n, n), |(i, j)| {
        if i.abs_diff(j) <= band {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

#[test]
fn order_one_bracket_matches_adaptive_quadrature() {
    // <A0, A1>_D against fine quadrature of the segment integral, random
    // banded entries.
    let m = build_circle(16, 1.0).unwrap();
    let n = m.outer_dim;
    let d = m.d_diag().unwrap().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for trial in 0..4 {
        let a0 = random_banded(n, 2, &mut rng);
        let a1 = random_banded(n, 2, &mut rng);
        let t = 0.6 + 0.2 * trial as f64;
        let v = eval_bracket(
            &m,
            &[BracketEntry::plain(a0.clone()), BracketEntry::plain(a1.clone())],
            t,
        )
        .unwrap()
        .value;
        // Simpson over s in [0,1] of Tr(A0 e^{-s t^2 D^2} A1 e^{-(1-s) t^2 D^2})
        let f = |s: f64| -> Complex64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    let w = a0[[i, j]] * a1[[j, i]];
                    if w != Complex64::new(0.0, 0.0) {
                        let e = (-s * t * t * d[j] * d[j] - (1.0 - s) * t * t * d[i] * d[i]).exp();
                        acc += w * e;
                    }
                }
            }
            acc
        };
        let steps = 2000;
        let mut quad = Complex64::new(0.0, 0.0);
        for k in 0..steps {
            let a = k as f64 / steps as f64;
            let b = (k + 1) as f64 / steps as f64;
            let mid = 0.5 * (a + b);
            quad += (f(a) + 4.0 * f(mid) + f(b)) * Complex64::new((b - a) / 6.0, 0.0);
        }
        let rel = (v - quad).norm() / (quad.norm() + 1e-300);
        assert!(rel < 1e-10, "trial {trial}: relative error {rel}");
    }
}

#[test]
fn order_two_bracket_matches_quadrature() {
    let m = build_circle(8, 1.0).unwrap();
    let n = m.outer_dim;
    let d = m.d_diag().unwrap().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let a: Vec<CMat> = (0..3).map(|_| random_banded(n, 1, &mut rng)).collect();
    let t = 0.9;
    let entries: Vec<BracketEntry> = a.iter().map(|m| BracketEntry::plain(m.clone())).collect();
    let v = eval_bracket(&m, &entries, t).unwrap().value;
    // 2-simplex quadrature over 0 <= s1 <= s2 <= 1 with gaps (s1, s2-s1, 1-s2)
    let f = |s1: f64, s2: f64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                let w0 = a[0][[i, j]];
                if w0 == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..n {
                    let w = w0 * a[1][[j, k]] * a[2][[k, i]];
                    if w != Complex64::new(0.0, 0.0) {
                        let e = (-t * t
                            * (s1 * d[j] * d[j]
                                + (s2 - s1) * d[k] * d[k]
                                + (1.0 - s2) * d[i] * d[i]))
                            .exp();
                        acc += w * e;
                    }
                }
            }
        }
        acc
    };
    // Duffy transform s1 = x y, s2 = y maps the triangle to the unit
    // square with Jacobian y; tensor Simpson converges at fourth order.
    let steps = 128;
    let weight = |k: usize| -> f64 {
        if k == 0 || k == steps {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        }
    };
    let mut quad = Complex64::new(0.0, 0.0);
    for py in 0..=steps {
        let y = py as f64 / steps as f64;
        let wy = weight(py);
        for px in 0..=steps {
            let x = px as f64 / steps as f64;
            let w = wy * weight(px);
            quad += f(x * y, y) * Complex64::new(w * y, 0.0);
        }
    }
    quad *= Complex64::new(1.0 / (9.0 * (steps * steps) as f64), 0.0);
    let rel = (v - quad).norm() / (quad.norm() + 1e-300);
    assert!(rel < 1e-9, "relative error {rel} (Simpson-Duffy oracle)");
}

#[test]
fn unit_insertion_identity() {
    // forB-type subdivision: exact up to floating point.
    let m = build_circle(12, 1.0).unwrap();
    let u_star = BracketEntry::plain(m.algebra["u*"].clone());
    let comm = commutator_entry(&m, &BracketEntry::plain(m.algebra["u"].clone()));
    let r = check_unit_insertion(&m, &[u_star, comm], 1.0).unwrap();
    assert!(r < 1e-11, "residual {r}");
    // zero entries: both sides vanish
    let z = BracketEntry::plain(Array2::from_elem(
        (m.outer_dim, m.outer_dim),
        Complex64::new(0.0, 0.0),
    ));
    let r0 = check_unit_insertion(&m, &[z.clone(), z], 1.0).unwrap();
    assert_eq!(r0, 0.0);
}

#[test]
fn merge_unmerge_identity_on_scaling_model() {
    let m = build_scaling(-12, 12, 2.0).unwrap();
    let u1 = m.scaling_unitary_pow(1).unwrap();
    let u_m1 = m.scaling_unitary_pow(-1).unwrap();
    let f = m
        .scaling_function(&[(0, Complex64::new(1.0, 0.0)), (2, Complex64::new(0.3, 0.1))])
        .unwrap();
    let g = m
        .scaling_function(&[(-1, Complex64::new(0.7, -0.2))])
        .unwrap();
    let h = m
        .scaling_function(&[(1, Complex64::new(0.4, 0.0))])
        .unwrap();
    // entries a_i U_i^* with U_0 = U, U_1 = U^{-1}, U_2 = U; mu(entry) as
    // the character of the group element whose adjoint is carried.
    let e0 = BracketEntry {
        op: linalg::matmul(&f, &linalg::adjoint(&u1.mat)),
        mu: u1.mu,
    };
    let e1 = BracketEntry {
        op: linalg::matmul(&g, &linalg::adjoint(&u_m1.mat)),
        mu: u_m1.mu,
    };
    let e2 = BracketEntry {
        op: linalg::matmul(&h, &linalg::adjoint(&u1.mat)),
        mu: u1.mu,
    };
    let r = check_merge_unmerge(&m, &[e0, e1, e2], 1, 0.8).unwrap();
    assert!(r < 1e-10, "residual {r}");
}

#[test]
fn rotation_rescaling_identity() {
    // Total character trivial: rotate entries, rescale epsilon by mu(U0)^2.
    let m = build_scaling(-12, 12, 2.0).unwrap();
    let u1 = m.scaling_unitary_pow(1).unwrap();
    let u_m1 = m.scaling_unitary_pow(-1).unwrap();
    let f = m
        .scaling_function(&[(0, Complex64::new(0.9, 0.0))])
        .unwrap();
    let g = m
        .scaling_function(&[(1, Complex64::new(0.5, 0.2))])
        .unwrap();
    let e0 = BracketEntry {
        op: linalg::matmul(&f, &linalg::adjoint(&u1.mat)),
        mu: u1.mu,
    };
    let e1 = BracketEntry {
        op: linalg::matmul(&g, &linalg::adjoint(&u_m1.mat)),
        mu: u_m1.mu,
    };
    // degree 0 entries (no D content)
    let r = check_rotation_rescaling(&m, &[e0, e1], 0, 0.7).unwrap();
    assert!(r < 1e-10, "relative residual {r}");
}

#[test]
fn derivative_identity_scale_and_phase() {
    let m = build_circle(12, 1.0).unwrap();
    let u_star = BracketEntry::plain(m.algebra["u*"].clone());
    let u = BracketEntry::plain(m.algebra["u"].clone());
    for family in [Family::Scale, Family::Phase] {
        let tau = match family {
            Family::Scale => 1.1,
            Family::Phase => 0.4,
        };
        let r =
            check_derivative_identity(&m, &[u_star.clone(), u.clone()], family, tau, 1e-4)
                .unwrap();
        assert!(r < 1e-5, "family {:?}: relative error {}", family, r);
    }
}

#[test]
fn derivative_identity_on_scaling_model_q2() {
    let m = build_scaling(-10, 10, 2.0).unwrap();
    let u1 = m.scaling_unitary_pow(1).unwrap();
    let u_m1 = m.scaling_unitary_pow(-1).unwrap();
    let f = m
        .scaling_function(&[(0, Complex64::new(1.0, 0.0))])
        .unwrap();
    let g = m
        .scaling_function(&[(1, Complex64::new(0.6, 0.1))])
        .unwrap();
    let h = m
        .scaling_function(&[(-1, Complex64::new(0.4, -0.3))])
        .unwrap();
    let slots = [
        BracketEntry {
            op: linalg::matmul(&f, &linalg::adjoint(&u1.mat)),
            mu: u1.mu,
        },
        BracketEntry {
            op: linalg::matmul(&g, &linalg::adjoint(&u_m1.mat)),
            mu: u_m1.mu,
        },
        BracketEntry {
            op: linalg::matmul(&h, &linalg::adjoint(&linalg::identity(m.outer_dim))),
            mu: 1.0,
        },
    ];
    let r = check_derivative_identity(&m, &slots, Family::Scale, 0.9, 1e-4).unwrap();
    assert!(r < 1e-5, "relative error {}", r);
}

#[test]
fn gaussian_decay_in_scale() {
    // The decay window needs the operator bounded away from zero by about
    // one, which is what the invertible double provides.
    let base = build_circle(8, 1.0).unwrap();
    let m = models::invertible_double(&graded_double(&base).unwrap(), models::Mass::Unit).unwrap();
    let useps = linalg::matmul(&m.algebra["u*"], &m.algebra["eps"]);
    let u = BracketEntry::plain(m.algebra["u"].clone());
    let slots = [BracketEntry::plain(useps), u];
    let j2 = j_cochain_at(&m, &slots, 2.0).unwrap();
    let j5 = j_cochain_at(&m, &slots, 5.0).unwrap();
    assert!(j2.norm() > 1e-12, "reference value must not vanish");
    assert!(
        j5.norm() <= 1e-6 * j2.norm(),
        "|J(5D)| = {}, |J(2D)| = {}",
        j5.norm(),
        j2.norm()
    );
}

#[test]
fn untwisted_cocycle_identity_at_fixed_scale() {
    // With trivial characters the heat cochain is closed under b + B; on a
    // finite graded model this is exact.
    let base = build_circle(8, 1.0).unwrap();
    let m = graded_double(&base).unwrap();
    let u = BracketEntry::plain(m.algebra["u"].clone());
    let u_star = BracketEntry::plain(m.algebra["u*"].clone());
    for t in [0.7, 1.2] {
        let total = b_of_j(&m, &[u_star.clone(), u.clone()], t).unwrap()
            + big_b_of_j(&m, &[u_star.clone(), u.clone()], t).unwrap();
        let scale = j_cochain_at(&m, &[u_star.clone(), u.clone()], t)
            .unwrap()
            .norm()
            + 1.0;
        assert!(
            total.norm() < 1e-9 * scale,
            "defect {} at t={}",
            total.norm(),
            t
        );
    }
}

#[test]
fn constant_term_of_resolvent_pair_is_sqrt_pi() {
    // <u*, [D, u]> on the circle: finite part sqrt(pi).
    let m = build_circle(96, 1.0).unwrap();
    let u_star = BracketEntry::plain(m.algebra["u*"].clone());
    let comm = commutator_entry(&m, &BracketEntry::plain(m.algebra["u"].clone()));
    let entries = [u_star, comm];
    let grid: Vec<f64> = (0..24).map(|i| 3e-3 * 1.18f64.powi(i)).collect();
    let (c0, diag) = extract_constant_term(&m, &entries, &grid, &[1.0, 2.0], 1).unwrap();
    let target = std::f64::consts::PI.sqrt();
    assert!(
        (c0.re - target).abs() < 1e-5 * target,
        "constant term {} vs sqrt(pi) {} (cond {})",
        c0.re,
        target,
        diag.condition
    );
    assert!(c0.im.abs() < 1e-8);
}

#[test]
fn j_entries_on_circle_reduce_to_plain_commutators() {
    let m = build_circle(6, 1.0).unwrap();
    let u = BracketEntry::plain(m.algebra["u"].clone());
    let slots = [BracketEntry::plain(m.algebra["u*"].clone()), u];
    let es = j_entries(&m.d_matrix(), &slots);
    let direct = commutator_entry(&m, &slots[1]);
    assert!(linalg::frobenius(&linalg::sub(&es[1].op, &direct.op)) < 1e-14);
}
