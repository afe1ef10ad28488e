//! Linear combinations of operator words and their normal form.
//!
//! Normal form of a word:
//!   * the grading letter appears at most once, leftmost, with the signs of
//!     the crossings it made collected into the coefficient;
//!   * group letters are pushed right across powers of D and |D|, each
//!     crossing collecting a character factor (`U D^k = mu(U)^k D^k U`);
//!   * adjacent group letters with the same generator merge (`U U^-1 = 1`);
//!   * maximal runs of D / |D| powers merge into `|D|^m` or `|D|^(m-1) D`,
//!     using that even powers of D and |D| coincide;
//!   * when the session declares a value for `[D, a]`, positive D powers are
//!     pushed right across `a`, splitting the word.
//!
//! Group letters do not commute past algebra letters, and |D| powers are
//! never pushed across letters.

use std::collections::BTreeMap;

use crate::atom::{Atom, Word};
use crate::coeff::Coeff;
use crate::session::{Parity, Session, SigmaMode};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Expr {
    pub terms: BTreeMap<Word, Coeff>,
}

/// Structural normalization of an atom sequence (no commutator-table splits).
/// Returns the collected scalar multiplier and the normalized word.
pub fn normalize_structural(atoms: &[Atom], session: &Session) -> (Coeff, Word) {
    let mut coeff = Coeff::one();
    let mut gamma_parity = 0u8;
    let mut sign_neg = false;
    let mut out: Vec<Atom> = Vec::with_capacity(atoms.len());

    // Extract gradings to the front, tracking anticommutation signs.
    for a in atoms {
        match a {
            Atom::Grading => {
                for b in &out {
                    if b.parity(session) == Parity::Odd {
                        sign_neg = !sign_neg;
                    }
                }
                gamma_parity ^= 1;
            }
            other => out.push(*other),
        }
    }

    // Bubble group letters right across D/|D| powers, merge runs; iterate.
    loop {
        let mut changed = false;

        // Merge adjacent same-generator group letters and maximal D/|D|
        // runs, dropping identity atoms as they appear.
        let mut rebuilt: Vec<Atom> = Vec::with_capacity(out.len());
        let mut run: Option<(i64, i64)> = None; // (sum of D exponents, total power)
        for a in out.iter().copied() {
            match a {
                Atom::D { k } => {
                    let (ds, t) = run.get_or_insert((0, 0));
                    *ds += k;
                    *t += k;
                }
                Atom::AbsD { k } => {
                    let (_, t) = run.get_or_insert((0, 0));
                    *t += k;
                }
                other => {
                    if let Some((dsum, total)) = run.take() {
                        rebuilt.extend(canonical_emit(dsum, total));
                    }
                    if let Atom::Group { pow: 0, .. } = other {
                        continue;
                    }
                    if let (Some(&Atom::Group { id: pid, pow: ppow }), Atom::Group { id, pow }) =
                        (rebuilt.last(), other)
                    {
                        if pid == id {
                            rebuilt.pop();
                            if ppow + pow != 0 {
                                rebuilt.push(Atom::Group { id, pow: ppow + pow });
                            }
                            continue;
                        }
                    }
                    rebuilt.push(other);
                }
            }
        }
        if let Some((dsum, total)) = run.take() {
            rebuilt.extend(canonical_emit(dsum, total));
        }
        if rebuilt != out {
            changed = true;
        }
        out = rebuilt;

        // Push group letters right across D/|D| powers.
        let mut i = 0;
        while i + 1 < out.len() {
            let (a, b) = (out[i], out[i + 1]);
            if let Atom::Group { id, pow } = a {
                let k = match b {
                    Atom::D { k } | Atom::AbsD { k } => Some(k),
                    _ => None,
                };
                if let Some(k) = k {
                    coeff = coeff.mul(&session.char_pow(id, pow * k));
                    out.swap(i, i + 1);
                    changed = true;
                    i = i.saturating_sub(1);
                    continue;
                }
            }
            i += 1;
        }

        if !changed {
            break;
        }
    }

    if gamma_parity == 1 {
        out.insert(0, Atom::Grading);
    }
    if sign_neg {
        coeff = coeff.neg();
    }
    (coeff, Word(out))
}

/// Canonical shape of a D/|D| run: `|D|^(total-1) D` when the run has odd
/// sign content, `|D|^total` otherwise (even powers of D equal those of |D|).
fn canonical_emit(dsum: i64, total: i64) -> Vec<Atom> {
    let dpar = dsum.rem_euclid(2);
    let mut v = Vec::new();
    if dpar == 0 {
        if total != 0 {
            v.push(Atom::AbsD { k: total });
        }
    } else {
        if total != 1 {
            v.push(Atom::AbsD { k: total - 1 });
        }
        v.push(Atom::D { k: 1 });
    }
    v
}

impl Expr {
    pub fn zero() -> Expr {
        Expr::default()
    }

    pub fn one() -> Expr {
        let mut terms = BTreeMap::new();
        terms.insert(Word::one(), Coeff::one());
        Expr { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn from_word(w: Word, c: Coeff) -> Expr {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        Expr { terms }
    }

    pub fn from_atoms(atoms: &[Atom], session: &Session) -> Expr {
        let (c, w) = normalize_structural(atoms, session);
        Expr::from_word(w, c).normalize(session)
    }

    pub fn add(&self, other: &Expr) -> Expr {
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            let entry = terms.entry(w.clone()).or_insert_with(Coeff::zero);
            *entry = entry.add(c);
            if entry.is_zero() {
                terms.remove(w);
            }
        }
        Expr { terms }
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Expr {
        Expr {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr {
            terms: self
                .terms
                .iter()
                .map(|(w, cc)| (w.clone(), cc.mul(c)))
                .collect(),
        }
    }

    /// Product of two expressions, normalized.
    pub fn mul(&self, other: &Expr, session: &Session) -> Expr {
        let mut acc = Expr::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut atoms = w1.0.clone();
                atoms.extend_from_slice(&w2.0);
                let (cm, w) = normalize_structural(&atoms, session);
                let c = c1.mul(c2).mul(&cm);
                acc = acc.add(&Expr::from_word(w, c));
            }
        }
        acc.normalize(session)
    }

    /// Full normalization: structural pass plus declared-commutator splits.
    pub fn normalize(&self, session: &Session) -> Expr {
        let mut acc: BTreeMap<Word, Coeff> = BTreeMap::new();
        let mut stack: Vec<(Word, Coeff)> = self
            .terms
            .iter()
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect();
        while let Some((w, c)) = stack.pop() {
            let (cm, nw) = normalize_structural(&w.0, session);
            let c = c.mul(&cm);
            if c.is_zero() {
                continue;
            }
            if session.has_commutator_rules() {
                if let Some(idx) = find_push_site(&nw, session) {
                    for (w2, c2) in push_commutator(&nw, idx, session) {
                        stack.push((w2, c.mul(&c2)));
                    }
                    continue;
                }
            }
            let entry = acc.entry(nw).or_insert_with(Coeff::zero);
            *entry = entry.add(&c);
        }
        acc.retain(|_, c| !c.is_zero());
        Expr { terms: acc }
    }

    /// Adjoint: reverse the word, star each letter, invert group letters,
    /// conjugate coefficients.
    pub fn adjoint(&self, session: &Session) -> Expr {
        let mut acc = Expr::zero();
        for (w, c) in &self.terms {
            let atoms: Vec<Atom> = w
                .0
                .iter()
                .rev()
                .map(|a| match *a {
                    Atom::Alg { id, sigma, adj } => Atom::Alg {
                        id,
                        sigma,
                        adj: !adj,
                    },
                    Atom::Group { id, pow } => Atom::Group { id, pow: -pow },
                    other => other,
                })
                .collect();
            let (cm, nw) = normalize_structural(&atoms, session);
            acc = acc.add(&Expr::from_word(nw, c.conj().mul(&cm)));
        }
        acc.normalize(session)
    }

    /// Applies the twist automorphism `sigma^k`.
    pub fn apply_sigma(&self, k: i64, session: &Session) -> Expr {
        let mut acc = Expr::zero();
        for (w, c) in &self.terms {
            let (cm, nw) = sigma_word(w, k, session);
            acc = acc.add(&Expr::from_word(nw, c.mul(&cm)));
        }
        acc.normalize(session)
    }

    /// Total scaling degree, if the expression is homogeneous.
    pub fn degree(&self, session: &Session) -> Option<i64> {
        let mut deg: Option<i64> = None;
        for w in self.terms.keys() {
            let d = w.degree(session);
            match deg {
                None => deg = Some(d),
                Some(existing) if existing != d => return None,
                _ => {}
            }
        }
        deg.or(Some(0))
    }
}

/// `sigma^k` on a single word: character factor for the group letters plus,
/// in abstract mode, the twist decorations on the algebra letters.
pub fn sigma_word(w: &Word, k: i64, session: &Session) -> (Coeff, Word) {
    let mut coeff = Coeff::one();
    let mut atoms = w.0.clone();
    for a in atoms.iter_mut() {
        match a {
            Atom::Group { id, pow } => {
                coeff = coeff.mul(&session.char_pow(*id, -k * *pow));
            }
            Atom::Alg { sigma, adj, .. } => {
                if session.mode() == SigmaMode::Abstract {
                    if *adj {
                        *sigma -= k;
                    } else {
                        *sigma += k;
                    }
                }
            }
            _ => {}
        }
    }
    (coeff, Word(atoms))
}

/// Finds the leftmost `D a` adjacency where `a` has a declared commutator.
fn find_push_site(w: &Word, session: &Session) -> Option<usize> {
    for i in 0..w.0.len().saturating_sub(1) {
        if let (Atom::D { k: 1 }, Atom::Alg { id, adj: false, .. }) = (w.0[i], w.0[i + 1]) {
            if session.commutator_value(id).is_some() {
                return Some(i);
            }
        }
    }
    None
}

/// `D sigma^s(a) = sigma^{s+1}(a) D + sigma^s([D,a])` with the declared value
/// for `[D, a]`; in crossed mode the twist on the letter stays trivial.
fn push_commutator(w: &Word, idx: usize, session: &Session) -> Vec<(Word, Coeff)> {
    let (id, s) = match w.0[idx + 1] {
        Atom::Alg {
            id,
            sigma,
            adj: false,
        } => (id, sigma),
        _ => unreachable!(),
    };
    let dval = session.commutator_value(id).expect("declared rule");
    let shift = if session.mode() == SigmaMode::Abstract { 1 } else { 0 };

    let mut first = w.0.clone();
    first[idx] = Atom::Alg {
        id,
        sigma: s + shift,
        adj: false,
    };
    first[idx + 1] = Atom::D { k: 1 };

    let mut second = w.0.clone();
    second.remove(idx);
    second[idx] = Atom::Alg {
        id: dval,
        sigma: s,
        adj: false,
    };

    vec![(Word(first), Coeff::one()), (Word(second), Coeff::one())]
}
