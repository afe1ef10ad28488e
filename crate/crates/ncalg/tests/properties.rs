//! Randomized structural properties of the rewriting engine.

use ncalg::{
    expr_string, parse_expr, parse_trace_expr, trace_string, Atom, CharValue, Expr, RuleSet, Session, TraceExpr,
};
use proptest::prelude::*;

fn base_session() -> Session {
    let mut s = Session::abstract_mode();
    s.declare_letter("a");
    s.declare_letter("b");
    s.declare_group("U", CharValue::Symbol);
    s
}

fn arb_atom() -> impl Strategy<Value = Atom> {
    prop_oneof![
        Just(Atom::Grading),
        (-3i64..=3).prop_map(|k| Atom::d(k)),
        (-3i64..=3).prop_map(|k| Atom::abs_d(k)),
        (0u32..2, -2i64..=2, any::<bool>()).prop_map(|(id, sigma, adj)| Atom::Alg {
            id,
            sigma,
            adj
        }),
        (-2i64..=2).prop_map(|pow| Atom::Group { id: 0, pow }),
    ]
}

fn arb_word() -> impl Strategy<Value = Vec<Atom>> {
    prop::collection::vec(arb_atom(), 0..8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn normalize_is_idempotent(atoms in arb_word()) {
        let s = base_session();
        let e = Expr::from_atoms(&atoms, &s);
        prop_assert_eq!(e.normalize(&s), e);
    }

    #[test]
    fn normalize_is_multiplicative(u in arb_word(), v in arb_word()) {
        let s = base_session();
        let mut joined = u.clone();
        joined.extend_from_slice(&v);
        let whole = Expr::from_atoms(&joined, &s);
        let parts = Expr::from_atoms(&u, &s).mul(&Expr::from_atoms(&v, &s), &s);
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn sigma_powers_compose(atoms in arb_word(), k in -3i64..=3, l in -3i64..=3) {
        let s = base_session();
        let e = Expr::from_atoms(&atoms, &s);
        let two_step = e.apply_sigma(k, &s).apply_sigma(l, &s);
        prop_assert_eq!(two_step, e.apply_sigma(k + l, &s));
    }

    #[test]
    fn trace_normal_form_is_rotation_invariant(atoms in arb_word(), r in 0usize..8) {
        // The canonical form must not depend on which rotation of the word
        // the summand entered with.
        let mut s = base_session();
        s.rules = RuleSet { selberg: true, sigma_invariance: true };
        if atoms.is_empty() { return Ok(()); }
        let mut rotated = atoms.clone();
        rotated.rotate_left(r % atoms.len());
        let t1 = TraceExpr::res(Expr::from_atoms(&atoms, &s)).normal_form(&s);
        let t2 = TraceExpr::res(Expr::from_atoms(&rotated, &s)).normal_form(&s);
        // Both are scalar multiples of the same canonical summand (or both
        // empty); rotating changes only the invertible character factor, and
        // with an even number of grading crossings only the word survives.
        if t1.summands.is_empty() {
            prop_assert!(t2.summands.is_empty());
        } else {
            prop_assert_eq!(t1.summands.len(), t2.summands.len());
            prop_assert_eq!(&t1.summands[0].0, &t2.summands[0].0);
            prop_assert_eq!(&t1.summands[0].1, &t2.summands[0].1);
        }
    }

    #[test]
    fn printed_expressions_reparse(atoms in arb_word()) {
        let mut s = base_session();
        let e = Expr::from_atoms(&atoms, &s);
        let text = expr_string(&e, &s);
        let back = parse_expr(&text, &mut s).expect("reparse");
        prop_assert_eq!(back, e);
    }

    #[test]
    fn printed_traces_reparse(atoms in arb_word(), weight in 1i64..3) {
        let mut s = base_session();
        let e = Expr::from_atoms(&atoms, &s);
        let t = TraceExpr::res(e.clone())
            .add(&TraceExpr::dix(weight, e))
            .normal_form(&s);
        let text = trace_string(&t, &s);
        let back = parse_trace_expr(&text, &mut s).expect("reparse");
        prop_assert_eq!(back.normal_form(&s), t);
    }
}
