//! Formal trace and residue functionals over operator words.
//!
//! Two functionals are supported: the residue trace `RES{..}` and the
//! weighted singular trace `DIX[p]{..}`. Normal form decides equality:
//!
//!   * `RES` summands are canonicalized under full cyclic rotation (an
//!     ungraded trace; grading signs reappear through word normalization),
//!     optional deletion of summands with nontrivial total character, and an
//!     optional quotient by the simultaneous twist shift;
//!   * `DIX[p]` summands rotate algebra letters around the word past the
//!     trailing weight, each pass twisting the moved letter by `sigma^{-p}`;
//!   * a summand whose word is reachable from itself with two different
//!     scalar multipliers is identically zero and is deleted.

use std::collections::BTreeMap;

use crate::atom::{Atom, Word};
use crate::coeff::Coeff;
use crate::expr::{normalize_structural, sigma_word, Expr};
use crate::session::{Parity, Session, SigmaMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TraceKind {
    Res,
    Dix(i64),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TraceExpr {
    pub summands: Vec<(TraceKind, Expr, Coeff)>,
}

impl TraceExpr {
    pub fn zero() -> TraceExpr {
        TraceExpr::default()
    }

    pub fn res(arg: Expr) -> TraceExpr {
        TraceExpr {
            summands: vec![(TraceKind::Res, arg, Coeff::one())],
        }
    }

    pub fn dix(p: i64, arg: Expr) -> TraceExpr {
        TraceExpr {
            summands: vec![(TraceKind::Dix(p), arg, Coeff::one())],
        }
    }

    pub fn scaled(kind: TraceKind, arg: Expr, scalar: Coeff) -> TraceExpr {
        TraceExpr {
            summands: vec![(kind, arg, scalar)],
        }
    }

    pub fn add(&self, other: &TraceExpr) -> TraceExpr {
        let mut summands = self.summands.clone();
        summands.extend(other.summands.iter().cloned());
        TraceExpr { summands }
    }

    pub fn neg(&self) -> TraceExpr {
        TraceExpr {
            summands: self
                .summands
                .iter()
                .map(|(k, e, c)| (*k, e.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &TraceExpr) -> TraceExpr {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Coeff) -> TraceExpr {
        TraceExpr {
            summands: self
                .summands
                .iter()
                .map(|(k, e, s)| (*k, e.clone(), s.mul(c)))
                .collect(),
        }
    }

    pub fn is_zero(&self, session: &Session) -> bool {
        self.normal_form(session).summands.is_empty()
    }

    /// Canonical form; equality of trace expressions is equality of normal
    /// forms.
    pub fn normal_form(&self, session: &Session) -> TraceExpr {
        let mut acc: BTreeMap<(TraceKind, Word), Coeff> = BTreeMap::new();
        for (kind, arg, scalar) in &self.summands {
            let arg = arg.normalize(session);
            for (w, c) in &arg.terms {
                let coeff = c.mul(scalar);
                if let Some((cw, cm)) = canonical_summand(*kind, w, session) {
                    let entry = acc.entry((*kind, cw)).or_insert_with(Coeff::zero);
                    *entry = entry.add(&coeff.mul(&cm));
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        TraceExpr {
            summands: acc
                .into_iter()
                .map(|((k, w), c)| (k, Expr::from_word(w, Coeff::one()), c))
                .collect(),
        }
    }
}

/// Canonical representative `(cw, m)` of one trace atom, with
/// `T{word} = m * T{cw}`, or None when the summand is identically zero.
fn canonical_summand(kind: TraceKind, w: &Word, session: &Session) -> Option<(Word, Coeff)> {
    match kind {
        TraceKind::Res => canonical_res(w, session),
        TraceKind::Dix(p) => canonical_dix(w, p, session),
    }
}

fn canonical_res(w: &Word, session: &Session) -> Option<(Word, Coeff)> {
    let char_kill = session.rules.selberg
        || (session.rules.sigma_invariance && session.mode() == SigmaMode::Crossed);
    if char_kill && !w.char_trivial(session) {
        return None;
    }

    // A graded trace of an odd word vanishes.
    let gamma = matches!(w.0.first(), Some(Atom::Grading));
    let body: Vec<Atom> = if gamma { w.0[1..].to_vec() } else { w.0.clone() };
    if gamma {
        let odd = body
            .iter()
            .filter(|a| a.parity(session) == Parity::Odd)
            .count();
        if odd % 2 == 1 {
            return None;
        }
    }

    // Enumerate rotations cut at algebra-letter boundaries only, so that
    // every letter-free segment stays contiguous and its group letters and
    // D-runs merge into the same shape regardless of the incoming cut.
    let cuts: Vec<usize> = body
        .iter()
        .enumerate()
        .filter_map(|(i, a)| matches!(a, Atom::Alg { .. }).then_some(i))
        .collect();
    let cuts = if cuts.is_empty() { vec![0] } else { cuts };

    let mut orbit: BTreeMap<Word, Coeff> = BTreeMap::new();
    let mut zero = false;
    for r in cuts {
        let mut atoms: Vec<Atom> = Vec::with_capacity(w.0.len());
        if gamma {
            atoms.push(Atom::Grading);
        }
        atoms.extend_from_slice(&body[r..]);
        atoms.extend_from_slice(&body[..r]);
        // Rotating the moved prefix past the grading costs its parity sign.
        let mut sign = 1i64;
        if gamma {
            for a in &body[..r] {
                if a.parity(session) == Parity::Odd {
                    sign = -sign;
                }
            }
        }
        let (cm, nw) = normalize_structural(&atoms, session);
        let (cs, nw) = shift_canonical(&nw, session);
        let mult = cm.mul(&cs).scale_int(sign);
        match orbit.get(&nw) {
            Some(existing) if *existing != mult => {
                zero = true;
                break;
            }
            Some(_) => {}
            None => {
                orbit.insert(nw, mult);
            }
        }
    }
    if zero {
        return None;
    }
    orbit
        .into_iter()
        .min_by(|a, b| a.0.cmp(&b.0))
}

/// Canonical representative under the simultaneous twist shift, when the
/// rule is enabled in abstract mode. Returns `(c, w')` with
/// `RES{w} = c * RES{w'}`.
fn shift_canonical(w: &Word, session: &Session) -> (Coeff, Word) {
    if !session.rules.sigma_invariance || session.mode() != SigmaMode::Abstract {
        return (Coeff::one(), w.clone());
    }
    let first = w.0.iter().find_map(|a| match a {
        Atom::Alg { sigma, adj, .. } => Some((*sigma, *adj)),
        _ => None,
    });
    let t = match first {
        Some((s, false)) => -s,
        Some((s, true)) => s,
        None => return (Coeff::one(), w.clone()),
    };
    // RES{w} = RES{sigma^t(w)} = c * RES{w'}.
    sigma_word(w, t, session)
}

fn canonical_dix(w: &Word, p: i64, session: &Session) -> Option<(Word, Coeff)> {
    // Split off a pinned grading prefix and the trailing D/|D| weight.
    let atoms = w.0.clone();
    let gamma = matches!(atoms.first(), Some(Atom::Grading));
    let start = usize::from(gamma);
    let mut end = atoms.len();
    while end > start && matches!(atoms[end - 1], Atom::D { .. } | Atom::AbsD { .. }) {
        end -= 1;
    }
    let prefix: Vec<Atom> = atoms[..start].to_vec();
    let middle: Vec<Atom> = atoms[start..end].to_vec();
    let tail: Vec<Atom> = atoms[end..].to_vec();

    // The letter-rotation rule is justified only when the word carries its
    // weight as a trailing power of total order -p and no group letters are
    // present; anything else is left as it stands.
    let tail_order: i64 = tail
        .iter()
        .map(|a| match a {
            Atom::D { k } | Atom::AbsD { k } => *k,
            _ => 0,
        })
        .sum();
    let has_groups = atoms.iter().any(|a| matches!(a, Atom::Group { .. }));
    if tail_order != -p || has_groups {
        return Some((w.clone(), Coeff::one()));
    }

    // Breadth-first search over twisted rotations of the middle; only even
    // algebra letters may travel past the weight.
    let movable = |a: &Atom| match a {
        Atom::Alg { id, .. } => session.letter(*id).parity == Parity::Even,
        _ => false,
    };
    // A full pass of every letter equals a global sigma^{-p}; for middles
    // made of letters only, quotient by that shift to keep the orbit finite.
    let pure_letters = middle.iter().all(|a| matches!(a, Atom::Alg { .. }));
    let reduce = |state: Vec<Atom>| -> Vec<Atom> {
        if !(pure_letters && p != 0 && session.mode() == SigmaMode::Abstract) {
            return state;
        }
        let s0 = state.iter().find_map(|a| match a {
            Atom::Alg { sigma, adj, .. } => Some(if *adj { -*sigma } else { *sigma }),
            _ => None,
        });
        let t = match s0 {
            Some(s) => -p * s.div_euclid(p),
            None => return state,
        };
        if t == 0 {
            return state;
        }
        state
            .into_iter()
            .map(|a| twist_atom(a, t, session).0)
            .collect()
    };
    let middle = reduce(middle);
    let mut seen: BTreeMap<Vec<Atom>, Coeff> = BTreeMap::new();
    let mut queue: Vec<(Vec<Atom>, Coeff)> = vec![(middle.clone(), Coeff::one())];
    seen.insert(middle.clone(), Coeff::one());
    let cap = 4 * atoms.len() + 8;
    let mut zero = false;
    while let Some((state, mult)) = queue.pop() {
        if seen.len() > cap {
            break;
        }
        let mut nexts: Vec<(Vec<Atom>, Coeff)> = Vec::new();
        if let Some(first) = state.first().copied() {
            if movable(&first) {
                let (atom, c) = twist_atom(first, -p, session);
                let mut moved = state[1..].to_vec();
                moved.push(atom);
                nexts.push((reduce(moved), mult.mul(&c)));
            }
        }
        if state.len() > 1 {
            if let Some(last) = state.last().copied() {
                if movable(&last) {
                    let (atom, c) = twist_atom(last, p, session);
                    let mut moved = vec![atom];
                    moved.extend_from_slice(&state[..state.len() - 1]);
                    nexts.push((reduce(moved), mult.mul(&c)));
                }
            }
        }
        for (next, nmult) in nexts {
            match seen.get(&next) {
                Some(existing) => {
                    if *existing != nmult {
                        zero = true;
                    }
                }
                None => {
                    seen.insert(next.clone(), nmult.clone());
                    queue.push((next, nmult));
                }
            }
        }
        if zero {
            break;
        }
    }
    if zero {
        return None;
    }
    let (best_mid, best_mult) = seen
        .into_iter()
        .min_by(|a, b| a.0.cmp(&b.0))
        .expect("nonempty orbit");
    let mut canon = prefix;
    canon.extend(best_mid);
    canon.extend(tail);
    let (cm, cw) = normalize_structural(&canon, session);
    Some((cw, best_mult.mul(&cm)))
}

/// Applies `sigma^t` to a single non-group atom.
fn twist_atom(a: Atom, t: i64, session: &Session) -> (Atom, Coeff) {
    match (a, session.mode()) {
        (Atom::Alg { id, sigma, adj }, SigmaMode::Abstract) => {
            let s = if adj { sigma - t } else { sigma + t };
            (Atom::Alg { id, sigma: s, adj }, Coeff::one())
        }
        _ => (a, Coeff::one()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::session::{CharValue, RuleSet};

    #[test]
    fn residue_of_grading_times_d_vanishes() {
        let s = Session::abstract_mode();
        let arg = Expr::from_atoms(&[Atom::Grading, Atom::d(1)], &s);
        let t = TraceExpr::res(arg);
        assert!(t.is_zero(&s));
    }

    #[test]
    fn cyclic_rotation_identifies_words() {
        let mut s = Session::abstract_mode();
        let a = s.declare_letter("a");
        let b = s.declare_letter("b");
        let ab = Expr::from_atoms(&[Atom::alg(a), Atom::alg(b)], &s);
        let ba = Expr::from_atoms(&[Atom::alg(b), Atom::alg(a)], &s);
        let t = TraceExpr::res(ab).sub(&TraceExpr::res(ba));
        assert!(t.is_zero(&s));
    }

    #[test]
    fn split_runs_identify() {
        // RES{ |D| a |D| } equals RES{ a |D|^2 }.
        let mut s = Session::abstract_mode();
        let a = s.declare_letter("a");
        let split = Expr::from_atoms(&[Atom::abs_d(1), Atom::alg(a), Atom::abs_d(1)], &s);
        let merged = Expr::from_atoms(&[Atom::alg(a), Atom::abs_d(2)], &s);
        let t = TraceExpr::res(split).sub(&TraceExpr::res(merged));
        assert!(t.is_zero(&s));
    }

    #[test]
    fn selberg_deletes_nontrivial_character() {
        let mut s = Session::crossed();
        s.rules = RuleSet {
            selberg: true,
            sigma_invariance: false,
        };
        let a = s.declare_letter("a");
        let u = s.declare_group("U", CharValue::Symbol);
        let au = Expr::from_atoms(&[Atom::alg(a), Atom::group(u, 1)], &s);
        assert!(TraceExpr::res(au).is_zero(&s));
    }

    #[test]
    fn hypertrace_rotation_with_weight() {
        // DIX[p] of a b |D|^-p - b sigma^-p(a) |D|^-p = 0 in abstract mode.
        let mut s = Session::abstract_mode();
        let a = s.declare_letter("a");
        let b = s.declare_letter("b");
        let p = 2;
        let lhs = Expr::from_atoms(&[Atom::alg(a), Atom::alg(b), Atom::abs_d(-p)], &s);
        let rhs = Expr::from_atoms(
            &[
                Atom::alg(b),
                Atom::Alg {
                    id: a,
                    sigma: -p,
                    adj: false,
                },
                Atom::abs_d(-p),
            ],
            &s,
        );
        let t = TraceExpr::dix(p, lhs).sub(&TraceExpr::dix(p, rhs));
        assert!(t.is_zero(&s));
    }
}
