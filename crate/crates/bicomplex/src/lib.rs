//! Cochains valued in formal traces, their Hochschild and cyclic
//! coboundaries, and builders for the twisted local cocycles.

pub mod verify;

use std::sync::Arc;

use ncalg::{
    higher_twisted_commutator, twisted_commutator, Atom, Coeff, CommutatorWith, Expr, HigherForm,
    Session, TraceExpr, TraceKind,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CochainError {
    #[error("degree must be positive")]
    DegreeNotPositive,
    #[error("cyclic coboundary needs degree >= 1")]
    DegreeZero,
    #[error("wrong number of arguments: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
}

type Body = Arc<dyn Fn(&Session, &[Expr]) -> TraceExpr + Send + Sync>;

/// A multilinear cochain of degree `q` (it takes `q + 1` arguments).
#[derive(Clone)]
pub struct Cochain {
    pub degree: usize,
    body: Body,
}

impl Cochain {
    pub fn new(degree: usize, body: Body) -> Self {
        Cochain { degree, body }
    }

    pub fn instantiate(&self, session: &Session, args: &[Expr]) -> Result<TraceExpr, CochainError> {
        if args.len() != self.degree + 1 {
            return Err(CochainError::Arity {
                expected: self.degree + 1,
                got: args.len(),
            });
        }
        Ok((self.body)(session, args))
    }

    /// Renders the cochain applied to fresh letters `x0 .. xq`.
    pub fn describe(&self, session: &mut Session) -> String {
        let args: Vec<Expr> = (0..=self.degree)
            .map(|i| {
                let id = session.declare_letter(&format!("x{}", i));
                Expr::from_atoms(&[Atom::alg(id)], session)
            })
            .collect();
        let t = (self.body)(session, &args);
        ncalg::trace_string(&t.normal_form(session), session)
    }
}

/// Hochschild coboundary: degree q -> q + 1.
pub fn hochschild_b(c: &Cochain) -> Cochain {
    let q = c.degree;
    let inner = c.body.clone();
    Cochain::new(
        q + 1,
        Arc::new(move |session, args| {
            debug_assert_eq!(args.len(), q + 2);
            let mut acc = TraceExpr::zero();
            for i in 0..=q {
                let mut merged: Vec<Expr> = Vec::with_capacity(q + 1);
                merged.extend_from_slice(&args[..i]);
                merged.push(args[i].mul(&args[i + 1], session));
                merged.extend_from_slice(&args[i + 2..]);
                let sign = if i % 2 == 0 { 1 } else { -1 };
                acc = acc.add(&inner(session, &merged).scale(&Coeff::from_int(sign)));
            }
            let mut wrap: Vec<Expr> = Vec::with_capacity(q + 1);
            wrap.push(args[q + 1].mul(&args[0], session));
            wrap.extend_from_slice(&args[1..=q]);
            let sign = if (q + 1) % 2 == 0 { 1 } else { -1 };
            acc.add(&inner(session, &wrap).scale(&Coeff::from_int(sign)))
        }),
    )
}

/// Cyclic coboundary: degree q -> q - 1, inserting the unit in front and
/// summing cyclic rearrangements with signs `(-1)^{k(q-1)}`.
pub fn connes_b_cyclic(c: &Cochain) -> Result<Cochain, CochainError> {
    if c.degree == 0 {
        return Err(CochainError::DegreeZero);
    }
    let q_out = c.degree - 1;
    let inner = c.body.clone();
    Ok(Cochain::new(
        q_out,
        Arc::new(move |session, args| {
            debug_assert_eq!(args.len(), q_out + 1);
            let n = q_out + 1;
            let mut acc = TraceExpr::zero();
            for k in 0..n {
                let mut rearranged: Vec<Expr> = Vec::with_capacity(n + 1);
                rearranged.push(Expr::one());
                for j in 0..n {
                    rearranged.push(args[(k + j) % n].clone());
                }
                let sign = if (k * q_out) % 2 == 0 { 1 } else { -1 };
                acc = acc.add(&inner(session, &rearranged).scale(&Coeff::from_int(sign)));
            }
            acc
        }),
    ))
}

/// The weighted-trace Hochschild cocycle of weight `p`:
/// `(a0,..,ap) -> DIX[p]{ g a0 [D,s^-1(a1)] .. [D,s^-p(ap)] D^-p }`.
pub fn build_kappa(p: i64) -> Result<Cochain, CochainError> {
    if p <= 0 {
        return Err(CochainError::DegreeNotPositive);
    }
    Ok(Cochain::new(
        p as usize,
        Arc::new(move |session, args| {
            let mut word = Expr::from_atoms(&[Atom::Grading], session);
            word = word.mul(&args[0], session);
            for (i, a) in args.iter().enumerate().skip(1) {
                let shifted = a.apply_sigma(-(i as i64), session);
                let comm = twisted_commutator(&shifted, CommutatorWith::D, session);
                word = word.mul(&comm, session);
            }
            word = word.mul(&Expr::from_atoms(&[Atom::d(-p)], session), session);
            TraceExpr::dix(p, word)
        }),
    ))
}

/// Coefficient of the local index components:
/// `(-1)^{|k|} Gamma(|k| + q/2) / (k1! .. kq! (k1+1)(k1+k2+2) ... (|k|+q))`.
pub fn index_coefficient(q: usize, k: &[i64]) -> Coeff {
    let total: i64 = k.iter().sum();
    let mut denom = Coeff::one();
    for ki in k {
        let mut f = 1i64;
        for j in 1..=*ki {
            f *= j;
        }
        denom = denom.mul(&Coeff::from_int(f));
    }
    let mut running = 0i64;
    for (i, ki) in k.iter().enumerate() {
        running += ki;
        denom = denom.mul(&Coeff::from_int(running + i as i64 + 1));
    }
    let gamma = Coeff::gamma_half(2 * total + q as i64);
    let sign = if total % 2 == 0 { 1 } else { -1 };
    // denom is a product of positive integers: invert its single rational.
    let (m, g) = denom.as_single().expect("integer denominator");
    assert!(m.is_one());
    let inv = Coeff::from_rational(g.re.recip());
    gamma.mul(&inv).scale_int(sign)
}

/// Enumerates multi-indices `(k1..kq)` with `0 <= ki <= kmax`.
fn multi_indices(q: usize, kmax: i64) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..q {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=kmax).map(move |k| {
                    let mut v2 = v.clone();
                    v2.push(k);
                    v2
                })
            })
            .collect();
    }
    out
}

/// The local-index cochain of degree `q`, truncated at `ki <= kmax`:
/// the sum of residues of higher twisted commutators against
/// `|D|^{-2|k|-q}`; even degrees carry the grading, odd degrees fold in
/// `sqrt(2i)`.
pub fn build_tau_ansatz(q: usize, kmax: i64) -> Result<Cochain, CochainError> {
    if q == 0 {
        return Err(CochainError::DegreeNotPositive);
    }
    Ok(Cochain::new(
        q,
        Arc::new(move |session, args| {
            let even = q % 2 == 0;
            let mut acc = TraceExpr::zero();
            for k in multi_indices(q, kmax) {
                let total: i64 = k.iter().sum();
                let mut coeff = index_coefficient(q, &k);
                if !even {
                    coeff = coeff.mul(&Coeff::sqrt_2i());
                }
                let mut word = if even {
                    Expr::from_atoms(&[Atom::Grading], session)
                } else {
                    Expr::one()
                };
                word = word.mul(&args[0], session);
                let mut running = 0i64;
                for i in 1..=q {
                    running += k[i - 1];
                    let shift = -2 * running - i as i64;
                    let shifted = args[i].apply_sigma(shift, session);
                    let comm =
                        higher_twisted_commutator(&shifted, k[i - 1], HigherForm::WithD, session)
                            .expect("nonnegative order");
                    word = word.mul(&comm, session);
                }
                let tail = Expr::from_atoms(&[Atom::abs_d(-2 * total - q as i64)], session);
                word = word.mul(&tail, session);
                acc = acc.add(&TraceExpr::scaled(TraceKind::Res, word, coeff));
            }
            acc
        }),
    ))
}

/// Constant-term expansion of a bracket with entries `e0..eq` of total
/// scaling degree `m`, truncated at `ni <= cap`:
/// `sum_n (-1)^{|n|} Gamma(|n| + m/2) / (prod ni! prod (n1+..+ni+i)) *
///   RES{ [g] e0 nab^{n1}(s^{-2 n1}(e1)) .. nab^{nq}(s^{-2(n1+..+nq)}(eq))
///        |D|^{-2|n|-m} }`.
pub fn symbolic_constant_term(
    session: &Session,
    entries: &[Expr],
    graded: bool,
    cap: i64,
) -> TraceExpr {
    let q = entries.len() - 1;
    let m: i64 = entries
        .iter()
        .map(|e| e.degree(session).expect("homogeneous entry"))
        .sum();
    let mut acc = TraceExpr::zero();
    for n in multi_indices(q, cap) {
        let total: i64 = n.iter().sum();
        if 2 * total + m <= 0 {
            // Gamma argument must be positive; degree-zero brackets sit
            // outside the residue-template range.
            continue;
        }
        let mut coeff = Coeff::gamma_half(2 * total + m);
        let sign = if total % 2 == 0 { 1 } else { -1 };
        let mut denom = 1i64;
        for ni in &n {
            for j in 1..=*ni {
                denom *= j;
            }
        }
        let mut running = 0i64;
        for (i, ni) in n.iter().enumerate() {
            running += ni;
            denom *= running + i as i64 + 1;
        }
        coeff = coeff.scale_int(sign).mul(&Coeff::from_ratio(1, denom));

        let mut word = if graded {
            Expr::from_atoms(&[Atom::Grading], session)
        } else {
            Expr::one()
        };
        word = word.mul(&entries[0], session);
        let mut running = 0i64;
        for i in 1..=q {
            running += n[i - 1];
            let shifted = entries[i].apply_sigma(-2 * running, session);
            let mut conv = shifted;
            for _ in 0..n[i - 1] {
                conv = twisted_commutator(&conv, CommutatorWith::DSquared, session);
            }
            word = word.mul(&conv, session);
        }
        let tail = Expr::from_atoms(&[Atom::abs_d(-2 * total - m)], session);
        word = word.mul(&tail, session);
        acc = acc.add(&TraceExpr::scaled(TraceKind::Res, word, coeff));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use ncalg::expr_string;

    fn letters(session: &mut Session, n: usize) -> Vec<Expr> {
        (0..n)
            .map(|i| {
                let id = session.declare_letter(&format!("a{}", i));
                Expr::from_atoms(&[Atom::alg(id)], session)
            })
            .collect()
    }

    #[test]
    fn coefficients_match_known_values() {
        // q=1, k=0: Gamma(1/2) = sqrt(pi)
        assert_eq!(index_coefficient(1, &[0]), Coeff::sqrt_pi());
        // q=2, k=(0,0): Gamma(1)/(1*2) = 1/2
        assert_eq!(index_coefficient(2, &[0, 0]), Coeff::from_ratio(1, 2));
        // q=2, k=(1,0): -Gamma(2)/(1! * (1+1)(1+0+2)) = -1/6
        assert_eq!(index_coefficient(2, &[1, 0]), Coeff::from_ratio(-1, 6));
    }

    #[test]
    fn b_of_degree_zero_cochain() {
        // b phi (a0, a1) = phi(a0 a1) - phi(a1 a0).
        let mut s = Session::abstract_mode();
        let phi = Cochain::new(
            0,
            Arc::new(|_s: &Session, args: &[Expr]| TraceExpr::res(args[0].clone())),
        );
        let b = hochschild_b(&phi);
        let args = letters(&mut s, 2);
        let t = b.instantiate(&s, &args).unwrap();
        let direct = TraceExpr::res(args[0].mul(&args[1], &s))
            .sub(&TraceExpr::res(args[1].mul(&args[0], &s)));
        assert_eq!(t.normal_form(&s), direct.normal_form(&s));
    }

    #[test]
    fn cyclic_coboundary_of_degree_one() {
        // B psi (a) = psi(1, a) for a 1-cochain.
        let mut s = Session::abstract_mode();
        let psi = Cochain::new(
            1,
            Arc::new(|s: &Session, args: &[Expr]| {
                TraceExpr::res(args[0].mul(&args[1], s))
            }),
        );
        let b = connes_b_cyclic(&psi).unwrap();
        let args = letters(&mut s, 1);
        let t = b.instantiate(&s, &args).unwrap();
        let direct = TraceExpr::res(args[0].clone());
        assert_eq!(t.normal_form(&s), direct.normal_form(&s));
    }

    #[test]
    fn b_squared_vanishes() {
        let mut s = Session::abstract_mode();
        for p in 1..=2 {
            let kappa = build_kappa(p).unwrap();
            let bb = hochschild_b(&hochschild_b(&kappa));
            let args = letters(&mut s, p as usize + 3);
            let t = bb.instantiate(&s, &args).unwrap();
            assert!(
                t.is_zero(&s),
                "b^2 != 0 at p={}: {}",
                p,
                ncalg::trace_string(&t.normal_form(&s), &s)
            );
        }
    }

    #[test]
    fn cyclic_squared_vanishes() {
        let mut s = Session::abstract_mode();
        let tau = build_tau_ansatz(3, 0).unwrap();
        let bb = connes_b_cyclic(&connes_b_cyclic(&tau).unwrap()).unwrap();
        let args = letters(&mut s, 2);
        let t = bb.instantiate(&s, &args).unwrap();
        assert!(t.is_zero(&s));
    }

    #[test]
    fn kappa_describes_one_commutator_at_weight_one() {
        let mut s = Session::abstract_mode();
        let kappa = build_kappa(1).unwrap();
        let text = kappa.describe(&mut s);
        assert!(text.contains("DIX[1]{"), "got {}", text);
        let x1 = s.letter_id("x1").unwrap();
        let _ = x1;
        assert!(text.contains("g x0"), "got {}", text);
    }

    #[test]
    fn tau_ansatz_lowest_odd_term() {
        // q=1, kmax=0: sqrt(2i) sqrt(pi) RES{ a0 [D, s^-1(a1)] |D|^-1 }.
        let mut s = Session::abstract_mode();
        let tau = build_tau_ansatz(1, 0).unwrap();
        let args = letters(&mut s, 2);
        let t = tau.instantiate(&s, &args).unwrap();
        let comm = twisted_commutator(&args[1].apply_sigma(-1, &s), CommutatorWith::D, &s);
        let word = args[0]
            .mul(&comm, &s)
            .mul(&Expr::from_atoms(&[Atom::abs_d(-1)], &s), &s);
        let expected = TraceExpr::scaled(
            TraceKind::Res,
            word,
            Coeff::sqrt_2i().mul(&Coeff::sqrt_pi()),
        );
        assert_eq!(t.normal_form(&s), expected.normal_form(&s));
        let _ = expr_string(&args[0], &s);
    }

    #[test]
    fn tau_ansatz_matches_constant_term_expansion() {
        // The degree-q cochain agrees with the constant-term expansion of
        // the bracket with entries (a0, [D, s^-1(a1)], .., [D, s^-q(aq)]).
        let mut s = Session::abstract_mode();
        for (q, kmax) in [(1usize, 2i64), (2, 1)] {
            let tau = build_tau_ansatz(q, kmax).unwrap();
            let args = letters(&mut s, q + 1);
            let t1 = tau.instantiate(&s, &args).unwrap();
            let mut entries = vec![args[0].clone()];
            for i in 1..=q {
                entries.push(twisted_commutator(
                    &args[i].apply_sigma(-(i as i64), &s),
                    CommutatorWith::D,
                    &s,
                ));
            }
            let mut t2 = symbolic_constant_term(&s, &entries, q % 2 == 0, kmax);
            if q % 2 == 1 {
                t2 = t2.scale(&Coeff::sqrt_2i());
            }
            assert_eq!(
                t1.normal_form(&s),
                t2.normal_form(&s),
                "mismatch at q={q}, kmax={kmax}"
            );
        }
    }
}
