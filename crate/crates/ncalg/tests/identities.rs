//! Exact identities of the twisted word calculus.

use ncalg::{
    expand_abs_power, higher_twisted_commutator, sigma_capital, sigma_capital_identity_residual,
    twisted_commutator, Atom, CharValue, Coeff, CommutatorWith, ExpandVariant, Expr, HigherForm,
    RuleSet, SExp, Session, TraceExpr, Word,
};

fn letter(session: &mut Session, name: &str) -> Expr {
    let id = session.declare_letter(name);
    Expr::from_atoms(&[Atom::alg(id)], session)
}

#[test]
fn scaling_unitary_crosses_d_powers() {
    let mut s = Session::crossed();
    let u = s.declare_group("U", CharValue::Symbol);
    let e = Expr::from_atoms(&[Atom::group(u, 1), Atom::d(2)], &s);
    let expected = Expr::from_word(
        Word(vec![Atom::abs_d(2), Atom::group(u, 1)]),
        Coeff::mu(u, 2),
    );
    assert_eq!(e, expected);
}

#[test]
fn sigma_on_crossed_monomial_scales_by_inverse_character() {
    let mut s = Session::crossed();
    let u = s.declare_group("U", CharValue::Symbol);
    let a = s.declare_letter("a");
    let au = Expr::from_atoms(&[Atom::alg(a), Atom::group(u, 1)], &s);
    let img = au.apply_sigma(1, &s);
    assert_eq!(img, au.scale(&Coeff::mu(u, -1)));
}

#[test]
fn sigma_trivial_on_plain_letters_in_crossed_mode() {
    let mut s = Session::crossed();
    let a = letter(&mut s, "a");
    assert_eq!(a.apply_sigma(5, &s), a);
}

#[test]
fn sigma_is_multiplicative() {
    let mut s = Session::crossed();
    let u = s.declare_group("U", CharValue::Symbol);
    let v = s.declare_group("V", CharValue::Symbol);
    let a = s.declare_letter("a");
    let b = s.declare_letter("b");
    let au = Expr::from_atoms(&[Atom::alg(a), Atom::group(u, 1)], &s);
    let bv = Expr::from_atoms(&[Atom::alg(b), Atom::group(v, 1)], &s);
    let prod = au.mul(&bv, &s);
    let lhs = prod.apply_sigma(1, &s);
    let rhs = au.apply_sigma(1, &s).mul(&bv.apply_sigma(1, &s), &s);
    assert_eq!(lhs, rhs);
    // and the image is mu(UV)^-1 times the product
    assert_eq!(lhs, prod.scale(&Coeff::mu(u, -1).mul(&Coeff::mu(v, -1))));
}

#[test]
fn sigma_composes_additively() {
    let mut s = Session::abstract_mode();
    let a = letter(&mut s, "a");
    let one_then_two = a.apply_sigma(1, &s).apply_sigma(2, &s);
    let three = a.apply_sigma(3, &s);
    assert_eq!(one_then_two, three);
}

#[test]
fn commutator_with_declared_value_collapses() {
    let mut s = Session::crossed();
    let u = s.declare_group("U", CharValue::Symbol);
    let a = s.declare_letter("a");
    let da = s.declare_letter_full("da", ncalg::Parity::Odd, 1);
    s.declare_commutator(a, da);
    let au = Expr::from_atoms(&[Atom::alg(a), Atom::group(u, 1)], &s);
    let c = twisted_commutator(&au, CommutatorWith::D, &s);
    let expected = Expr::from_atoms(&[Atom::alg(da), Atom::group(u, 1)], &s);
    assert_eq!(c, expected);
}

#[test]
fn twisted_leibniz_rule() {
    // [D, ab] = sigma(a) [D, b] + [D, a] b, in abstract mode.
    let mut s = Session::abstract_mode();
    let a = letter(&mut s, "a");
    let b = letter(&mut s, "b");
    let ab = a.mul(&b, &s);
    let lhs = twisted_commutator(&ab, CommutatorWith::D, &s);
    let rhs = a
        .apply_sigma(1, &s)
        .mul(&twisted_commutator(&b, CommutatorWith::D, &s), &s)
        .add(&twisted_commutator(&a, CommutatorWith::D, &s).mul(&b, &s));
    assert_eq!(lhs.sub(&rhs).normalize(&s), Expr::zero());
}

#[test]
fn higher_commutator_small_orders() {
    let mut s = Session::abstract_mode();
    let a = letter(&mut s, "a");
    // k = 1, plain: D^2 a - sigma^2(a) D^2
    let h1 = higher_twisted_commutator(&a, 1, HigherForm::Plain, &s).unwrap();
    let d2 = Expr::from_atoms(&[Atom::abs_d(2)], &s);
    let expected = d2
        .mul(&a, &s)
        .sub(&a.apply_sigma(2, &s).mul(&d2, &s))
        .normalize(&s);
    assert_eq!(h1, expected);
}

#[test]
fn higher_commutator_recursion() {
    // h_{k+1}(a) = D^2 h_k(a) - h_k(sigma^2 a) D^2, for both forms, k = 1.
    let mut s = Session::abstract_mode();
    let a = letter(&mut s, "a");
    let d2 = Expr::from_atoms(&[Atom::abs_d(2)], &s);
    for form in [HigherForm::Plain, HigherForm::WithD] {
        let h2 = higher_twisted_commutator(&a, 2, form, &s).unwrap();
        let h1 = higher_twisted_commutator(&a, 1, form, &s).unwrap();
        let h1s = higher_twisted_commutator(&a.apply_sigma(2, &s), 1, form, &s).unwrap();
        let rec = d2.mul(&h1, &s).sub(&h1s.mul(&d2, &s)).normalize(&s);
        assert_eq!(h2, rec);
    }
}

#[test]
fn conjugation_sum_lowest_order() {
    // k=0, l=1: D sigma^-1(a) D^-1 - a.
    let mut s = Session::abstract_mode();
    let a = letter(&mut s, "a");
    let got = sigma_capital(&a, 0, 1, &s).unwrap();
    let first = Expr::from_atoms(
        &[
            Atom::d(1),
            Atom::Alg {
                id: s.letter_id("a").unwrap(),
                sigma: -1,
                adj: false,
            },
            Atom::d(-1),
        ],
        &s,
    );
    assert_eq!(got, first.sub(&a).normalize(&s));
}

#[test]
fn conjugation_sum_untwisted_limit() {
    // With trivial twist (crossed mode, no group letters): D a D^-1 - a.
    let mut s = Session::crossed();
    let a = letter(&mut s, "a");
    let got = sigma_capital(&a, 0, 1, &s).unwrap();
    let id = s.letter_id("a").unwrap();
    let conj = Expr::from_atoms(&[Atom::d(1), Atom::alg(id), Atom::d(-1)], &s);
    assert_eq!(got, conj.sub(&a).normalize(&s));
}

#[test]
fn conjugation_sum_matches_higher_commutator() {
    // D^{2k+1-l} Sigma^{(k,l)}(a) = [D, sigma^{-l}(a)]^{(k)} D^{-l},
    // k <= 3, |l| <= 5.
    let mut s = Session::abstract_mode();
    let a = letter(&mut s, "a");
    for k in 0..=3 {
        for l in -5..=5 {
            let r = sigma_capital_identity_residual(&a, k, l, &s).unwrap();
            assert!(r.is_zero(), "residual nonzero at k={k}, l={l}");
        }
    }
}

#[test]
fn generalized_twisted_leibniz() {
    // nabla^m(P1 .. Pq) expands by the twisted multinomial rule, m<=3, q<=3.
    let mut s = Session::abstract_mode();
    let letters = [
        letter(&mut s, "p1"),
        letter(&mut s, "p2"),
        letter(&mut s, "p3"),
    ];
    let nabla = |x: &Expr, m: i64, s: &Session| -> Expr {
        let mut acc = x.clone();
        for _ in 0..m {
            acc = twisted_commutator(&acc, CommutatorWith::DSquared, s);
        }
        acc
    };
    let multinomial = |parts: &[i64]| -> i64 {
        let total: i64 = parts.iter().sum();
        let fact = |n: i64| (1..=n).product::<i64>().max(1);
        let mut v = fact(total);
        for p in parts {
            v /= fact(*p);
        }
        v
    };
    for q in 1..=3usize {
        let prod = letters[..q]
            .iter()
            .fold(Expr::one(), |acc, p| acc.mul(p, &s));
        for m in 0..=3i64 {
            let lhs = nabla(&prod, m, &s);
            // sum over compositions of m into q parts
            let mut rhs = Expr::zero();
            let mut comps: Vec<Vec<i64>> = vec![vec![]];
            for _ in 0..q {
                comps = comps
                    .into_iter()
                    .flat_map(|c| {
                        let used: i64 = c.iter().sum();
                        (0..=(m - used)).map(move |x| {
                            let mut c2 = c.clone();
                            c2.push(x);
                            c2
                        })
                    })
                    .collect();
            }
            for c in comps.into_iter().filter(|c| c.iter().sum::<i64>() == m) {
                let mut term = Expr::one();
                for (i, &mi) in c.iter().enumerate() {
                    let later: i64 = c[i + 1..].iter().sum();
                    let factor = nabla(&letters[i].apply_sigma(2 * later, &s), mi, &s);
                    term = term.mul(&factor, &s);
                }
                rhs = rhs.add(&term.scale(&Coeff::from_int(multinomial(&c))));
            }
            assert_eq!(
                lhs.sub(&rhs).normalize(&s),
                Expr::zero(),
                "twisted multinomial fails at q={q}, m={m}"
            );
        }
    }
}

#[test]
fn abs_power_expansion_shapes() {
    let mut s = Session::abstract_mode();
    let b = letter(&mut s, "b");
    // N=1, formal s: single term b |D|^s, remainder at order s-1.
    let e1 = expand_abs_power(&b, SExp::Formal, 1, ExpandVariant::AbsD, &mut s).unwrap();
    assert_eq!(e1.terms.len(), 1);
    assert_eq!(e1.terms[0].shift, 0);
    assert_eq!(e1.remainder_shift, Some(1));

    // N=2, s=2 integer: b |D|^2 + 2 del[b] |D| + remainder.
    let e2 = expand_abs_power(&b, SExp::Int(2), 2, ExpandVariant::AbsD, &mut s).unwrap();
    let (expr, rem) = e2.into_expr(&s).unwrap();
    let del_b = s.letter_id("del[b]").unwrap();
    let expected = Expr::from_atoms(
        &[Atom::alg(s.letter_id("b").unwrap()), Atom::abs_d(2)],
        &s,
    )
    .add(
        &Expr::from_atoms(&[Atom::alg(del_b), Atom::abs_d(1)], &s).scale(&Coeff::from_int(2)),
    );
    assert_eq!(expr, expected.normalize(&s));
    assert_eq!(rem, Some(0));

    // b = identity: |D|^s exactly, zero remainder.
    let e3 = expand_abs_power(&Expr::one(), SExp::Int(3), 4, ExpandVariant::AbsD, &mut s).unwrap();
    assert_eq!(e3.remainder_shift, None);
    let (expr3, _) = e3.into_expr(&s).unwrap();
    assert_eq!(expr3, Expr::from_atoms(&[Atom::abs_d(3)], &s));
}

#[test]
fn residue_trace_is_cyclic_on_crossed_monomials() {
    // RES{ (PU)(QV) } = RES{ (QV)(PU) } by plain rotation.
    let mut s = Session::crossed();
    let u = s.declare_group("U", CharValue::Symbol);
    let v = s.declare_group("V", CharValue::Symbol);
    let p = s.declare_letter("p");
    let q = s.declare_letter("q");
    let pu = Expr::from_atoms(&[Atom::alg(p), Atom::group(u, 1)], &s);
    let qv = Expr::from_atoms(&[Atom::alg(q), Atom::group(v, 1)], &s);
    let t = TraceExpr::res(pu.mul(&qv, &s)).sub(&TraceExpr::res(qv.mul(&pu, &s)));
    assert!(t.is_zero(&s));
}

#[test]
fn selberg_rule_kills_shifted_residues() {
    let mut s = Session::crossed();
    s.rules = RuleSet {
        selberg: true,
        sigma_invariance: false,
    };
    let u = s.declare_group("U", CharValue::Symbol);
    let a = s.declare_letter("a");
    let au = Expr::from_atoms(&[Atom::alg(a), Atom::group(u, 1)], &s);
    assert!(TraceExpr::res(au.clone()).is_zero(&s));
    // but without the rule it survives
    let mut s2 = s.clone();
    s2.rules.selberg = false;
    assert!(!TraceExpr::res(au).is_zero(&s2));
}

#[test]
fn adjoint_rule_for_sigma() {
    // sigma(a*) = (sigma^-1(a))*: applying sigma to a starred letter lowers
    // its decoration.
    let mut s = Session::abstract_mode();
    let a = s.declare_letter("a");
    let astar = Expr::from_atoms(&[Atom::alg_star(a)], &s);
    let img = astar.apply_sigma(1, &s);
    let expected = Expr::from_atoms(
        &[Atom::Alg {
            id: a,
            sigma: -1,
            adj: true,
        }],
        &s,
    );
    assert_eq!(img, expected);
    // (sigma(a))* = sigma^-1(a*), i.e. the starred atom with decoration +1.
    let sa = Expr::from_atoms(
        &[Atom::Alg {
            id: a,
            sigma: 1,
            adj: false,
        }],
        &s,
    );
    let expected_star = Expr::from_atoms(
        &[Atom::Alg {
            id: a,
            sigma: 1,
            adj: true,
        }],
        &s,
    );
    assert_eq!(sa.adjoint(&s), expected_star);
    // and the double adjoint is the identity
    assert_eq!(sa.adjoint(&s).adjoint(&s), sa);
}
