//! Twisted commutators, higher commutators, conjugation sums and the
//! pseudodifferential expansion of |D|-powers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::atom::{Atom, Word};
use crate::coeff::Coeff;
use crate::expr::Expr;
use crate::session::{DerivKind, Session};

#[derive(Debug, Error)]
pub enum OpError {
    #[error("negative order {0} not allowed")]
    NegativeOrder(i64),
    #[error("expression contains D or |D| powers")]
    PowersPresent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommutatorWith {
    D,
    AbsD,
    DSquared,
}

/// `[D, x]_s = D x - sigma(x) D` and its |D| and D^2 variants (the D^2
/// variant twists by sigma^2).
pub fn twisted_commutator(x: &Expr, with: CommutatorWith, session: &Session) -> Expr {
    let (left, shift): (Expr, i64) = match with {
        CommutatorWith::D => (Expr::from_atoms(&[Atom::d(1)], session), 1),
        CommutatorWith::AbsD => (Expr::from_atoms(&[Atom::abs_d(1)], session), 1),
        CommutatorWith::DSquared => (Expr::from_atoms(&[Atom::abs_d(2)], session), 2),
    };
    let lx = left.mul(x, session);
    let xr = x.apply_sigma(shift, session).mul(&left, session);
    lx.sub(&xr).normalize(session)
}

pub fn binomial(n: i64, k: i64) -> Coeff {
    if k < 0 || k > n {
        return Coeff::zero();
    }
    let mut acc = BigRational::one();
    for j in 0..k {
        acc *= BigRational::from_integer(BigInt::from(n - j));
        acc /= BigRational::from_integer(BigInt::from(j + 1));
    }
    Coeff::from_rational(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HigherForm {
    /// Alternating sum `sum_j (-1)^j C(k,j) D^{2(k-j)} sigma^{2j}(a) D^{2j}`.
    Plain,
    /// The same with one extra D distributed, the higher twisted commutator.
    WithD,
}

/// Higher twisted commutators of order `k`.
pub fn higher_twisted_commutator(
    a: &Expr,
    k: i64,
    form: HigherForm,
    session: &Session,
) -> Result<Expr, OpError> {
    if k < 0 {
        return Err(OpError::NegativeOrder(k));
    }
    let mut acc = Expr::zero();
    for j in 0..=k {
        let sign = if j % 2 == 0 { 1 } else { -1 };
        let c = binomial(k, j).scale_int(sign);
        match form {
            HigherForm::Plain => {
                let word = sandwich(a, 2 * (k - j), 2 * j, 2 * j, session);
                acc = acc.add(&word.scale(&c));
            }
            HigherForm::WithD => {
                let first = sandwich(a, 2 * (k - j) + 1, 2 * j, 2 * j, session);
                let second = sandwich(a, 2 * (k - j), 2 * j + 1, 2 * j + 1, session);
                acc = acc.add(&first.sub(&second).scale(&c));
            }
        }
    }
    Ok(acc.normalize(session))
}

/// `D^l sigma^t(a) D^r`.
fn sandwich(a: &Expr, l: i64, t: i64, r: i64, session: &Session) -> Expr {
    let dl = Expr::from_atoms(&[Atom::d(l)], session);
    let dr = Expr::from_atoms(&[Atom::d(r)], session);
    dl.mul(&a.apply_sigma(t, session), session).mul(&dr, session)
}

/// Scale-invariant conjugate `alpha^m(a) = D^m sigma^{-m}(a) D^{-m}`.
pub fn alpha_conj(a: &Expr, m: i64, session: &Session) -> Expr {
    sandwich(a, m, -m, -m, session)
}

/// Alternating conjugation sum
/// `sum_j (-1)^j C(k,j) (alpha^{l-2j}(a) - alpha^{l-2j-1}(a))`.
pub fn sigma_capital(a: &Expr, k: i64, l: i64, session: &Session) -> Result<Expr, OpError> {
    if k < 0 {
        return Err(OpError::NegativeOrder(k));
    }
    let mut acc = Expr::zero();
    for j in 0..=k {
        let sign = if j % 2 == 0 { 1 } else { -1 };
        let c = binomial(k, j).scale_int(sign);
        let hi = alpha_conj(a, l - 2 * j, session);
        let lo = alpha_conj(a, l - 2 * j - 1, session);
        acc = acc.add(&hi.sub(&lo).scale(&c));
    }
    Ok(acc.normalize(session))
}

/// Checks `D^{2k+1-l} Sigma^{(k,l)}(a) = [D, sigma^{-l}(a)]^{(k)} D^{-l}`
/// by normalizing the difference; returns the residual.
pub fn sigma_capital_identity_residual(
    a: &Expr,
    k: i64,
    l: i64,
    session: &Session,
) -> Result<Expr, OpError> {
    let lhs = Expr::from_atoms(&[Atom::d(2 * k + 1 - l)], session)
        .mul(&sigma_capital(a, k, l, session)?, session);
    let rhs = higher_twisted_commutator(&a.apply_sigma(-l, session), k, HigherForm::WithD, session)?
        .mul(&Expr::from_atoms(&[Atom::d(-l)], session), session);
    Ok(lhs.sub(&rhs).normalize(session))
}

/// Formal exponent for the |D|-power expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SExp {
    Formal,
    Int(i64),
}

/// One term of the expansion: a polynomial in the formal exponent times a
/// derived-letter body times `|D|^(s - k)` (or `D^(2(s-k))` for the D^2 form).
#[derive(Clone, Debug)]
pub struct ExpansionTerm {
    /// Coefficient polynomial in `s`, low degree first.
    pub coeff_poly: Vec<BigRational>,
    pub body: Expr,
    /// The shift `k` in `|D|^(s-k)`.
    pub shift: i64,
}

#[derive(Clone, Debug)]
pub struct AbsPowerExpansion {
    pub variant: ExpandVariant,
    pub terms: Vec<ExpansionTerm>,
    /// Order `s - N` (or `2s + q - N`) of the dropped remainder.
    pub remainder_shift: Option<i64>,
    pub exponent: SExp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpandVariant {
    /// `|D|^s b ~ sum_k c_k(s) delta^k(b) |D|^{s-k}`.
    AbsD,
    /// `D^{2s} T ~ sum_k c_k(s) nabla^k(T) D^{2(s-k)}`.
    DSquared,
}

/// Expands `|D|^s b` (resp. `D^{2s} T`) to order `N`, keeping the
/// derivative iterates as formal derived letters.
pub fn expand_abs_power(
    b: &Expr,
    s: SExp,
    n_terms: i64,
    variant: ExpandVariant,
    session: &mut Session,
) -> Result<AbsPowerExpansion, OpError> {
    if n_terms < 0 {
        return Err(OpError::NegativeOrder(n_terms));
    }
    for w in b.terms.keys() {
        if w.0.iter().any(|a| matches!(a, Atom::D { .. } | Atom::AbsD { .. })) {
            return Err(OpError::PowersPresent);
        }
    }
    let kind = match variant {
        ExpandVariant::AbsD => DerivKind::Delta,
        ExpandVariant::DSquared => DerivKind::Nabla,
    };
    let mut terms = Vec::new();
    for k in 0..n_terms {
        let body = derivative_iterate(b, kind, k as u32, session);
        if body.is_zero() {
            continue;
        }
        terms.push(ExpansionTerm {
            coeff_poly: falling_factorial_poly(k),
            body,
            shift: k,
        });
    }
    // The remainder integrates the next derivative iterate; when that
    // vanishes identically the expansion is exact.
    let remainder_shift = if derivative_iterate(b, kind, n_terms as u32, session).is_zero() {
        None
    } else {
        Some(n_terms)
    };
    Ok(AbsPowerExpansion {
        variant,
        terms,
        remainder_shift,
        exponent: s,
    })
}

impl AbsPowerExpansion {
    /// Evaluates at a concrete integer exponent, producing an expression
    /// (the remainder marker is returned alongside).
    pub fn into_expr(&self, session: &Session) -> Option<(Expr, Option<i64>)> {
        let s = match self.exponent {
            SExp::Int(v) => v,
            SExp::Formal => return None,
        };
        let mut acc = Expr::zero();
        for t in &self.terms {
            let mut c = BigRational::zero();
            let sv = BigRational::from_integer(BigInt::from(s));
            let mut pow = BigRational::one();
            for a in &t.coeff_poly {
                c += a * &pow;
                pow *= &sv;
            }
            if c.is_zero() {
                continue;
            }
            let tail = match self.variant {
                ExpandVariant::AbsD => Expr::from_atoms(&[Atom::abs_d(s - t.shift)], session),
                ExpandVariant::DSquared => {
                    Expr::from_atoms(&[Atom::d(2 * (s - t.shift))], session)
                }
            };
            acc = acc.add(
                &t.body
                    .mul(&tail, session)
                    .scale(&Coeff::from_rational(c)),
            );
        }
        Some((
            acc.normalize(session),
            self.remainder_shift.map(|r| s - r),
        ))
    }
}

/// `s (s-1) ... (s-k+1) / k!` as a polynomial in `s`.
fn falling_factorial_poly(k: i64) -> Vec<BigRational> {
    let mut poly = vec![BigRational::one()];
    for j in 0..k {
        // multiply by (s - j)
        let mut next = vec![BigRational::zero(); poly.len() + 1];
        for (d, c) in poly.iter().enumerate() {
            next[d + 1] += c;
            next[d] -= c * BigRational::from_integer(BigInt::from(j));
        }
        poly = next;
    }
    let mut fact = BigRational::one();
    for j in 1..=k {
        fact *= BigRational::from_integer(BigInt::from(j));
    }
    for c in poly.iter_mut() {
        *c /= &fact;
    }
    poly
}

/// k-th twisted derivative iterate with formal derived letters, expanded by
/// the twisted Leibniz rule; group letters and the grading are annihilated.
pub fn derivative_iterate(b: &Expr, kind: DerivKind, k: u32, session: &mut Session) -> Expr {
    let mut acc = b.clone();
    for _ in 0..k {
        acc = derivative_once(&acc, kind, session);
    }
    acc
}

fn derivative_once(b: &Expr, kind: DerivKind, session: &mut Session) -> Expr {
    let shift = match kind {
        DerivKind::Delta => 1,
        DerivKind::Nabla => 2,
        DerivKind::DComm => 1,
    };
    let mut acc = Expr::zero();
    for (w, c) in b.terms.clone() {
        let parts = derivative_word(&w, kind, shift, session);
        acc = acc.add(&parts.scale(&c));
    }
    acc.normalize(session)
}

fn derivative_word(w: &Word, kind: DerivKind, shift: i64, session: &mut Session) -> Expr {
    if w.0.is_empty() {
        return Expr::zero();
    }
    let head = w.0[0];
    let tail = Word(w.0[1..].to_vec());
    let d_head = derivative_atom(head, kind, session);
    let tail_expr = Expr::from_word(tail.clone(), Coeff::one());
    let mut acc = d_head.mul(&tail_expr, session);
    if !tail.0.is_empty() {
        let head_shifted =
            Expr::from_word(Word(vec![head]), Coeff::one()).apply_sigma(shift, session);
        let d_tail = derivative_word(&tail, kind, shift, session);
        acc = acc.add(&head_shifted.mul(&d_tail, session));
    }
    acc.normalize(session)
}

fn derivative_atom(a: Atom, kind: DerivKind, session: &mut Session) -> Expr {
    match a {
        Atom::Alg { id, sigma, adj } => {
            let derived = session.derived_letter(id, kind, 1);
            Expr::from_word(
                Word(vec![Atom::Alg {
                    id: derived,
                    sigma,
                    adj,
                }]),
                Coeff::one(),
            )
        }
        // Scaling unitaries and the grading have vanishing twisted
        // derivative; D powers are excluded by the caller.
        _ => Expr::zero(),
    }
}
