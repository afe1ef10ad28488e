//! Scale-integral transgression: the finite part of the cochain equals the
//! total coboundary of the integrated contraction cochains (trivial twist).

use jlo::{fit_constant_term, j_cochain, transgress, BracketEntry, Family};
use models::build_circle;
use models::linalg;
use num_complex::Complex64;

#[test]
fn trivial_entries_integrate_to_zero() {
    let m = build_circle(8, 1.0).unwrap();
    let z = BracketEntry::plain(linalg::identity(m.outer_dim).mapv(|_| Complex64::new(0.0, 0.0)));
    let (v, _) = transgress(&m, &[z.clone(), z], 0.05, &[-1.0]).unwrap();
    assert!(v.norm() < 1e-14);
}

#[test]
fn transgression_relation_at_degree_one() {
    // Pf0 J^1(tD) = b(Pf0 int Jbar^0) + B(Pf0 int Jbar^2) on (u*, u).
    let m = build_circle(32, 1.0).unwrap();
    let u_star = BracketEntry::plain(m.algebra["u*"].clone());
    let u = BracketEntry::plain(m.algebra["u"].clone());

    // Left side: finite part of J^1(tD) in t.
    let grid: Vec<f64> = (0..16).map(|i| 0.12 * 1.08f64.powi(i)).collect();
    let mut values = Vec::new();
    for &t in &grid {
        values.push(j_cochain(&m, &[u_star.clone(), u.clone()], Family::Scale, t).unwrap());
    }
    let (lhs, _) = fit_constant_term(&grid, &values, &[2.0, 4.0]).unwrap();

    let cut = 0.1;
    let powers = [2.0, 4.0];
    let g0 = |x: &BracketEntry| -> Complex64 {
        transgress(&m, std::slice::from_ref(x), cut, &powers).unwrap().0
    };
    let g2 = |x0: &BracketEntry, x1: &BracketEntry, x2: &BracketEntry| -> Complex64 {
        transgress(&m, &[x0.clone(), x1.clone(), x2.clone()], cut, &powers)
            .unwrap()
            .0
    };
    // b G0 (a0, a1) = G0(a0 a1) - G0(a1 a0)
    let b_part = g0(&u_star.product(&u)) - g0(&u.product(&u_star));
    // B G2 (a0, a1) = G2(1, a0, a1) - G2(1, a1, a0)
    let one = BracketEntry::plain(linalg::identity(m.outer_dim));
    let big_b_part = g2(&one, &u_star, &u) - g2(&one, &u, &u_star);
    let rhs = b_part + big_b_part;
    let rel = (lhs - rhs).norm() / (lhs.norm() + 1e-300);
    assert!(
        rel < 1e-4,
        "transgression mismatch: lhs {} vs rhs {} (rel {})",
        lhs,
        rhs,
        rel
    );
}
