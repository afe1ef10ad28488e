//! Operator-word atoms.

use crate::session::{LetterId, Parity, Session};
use crate::coeff::GroupId;

/// One letter of an operator word.
///
/// A word is a product of atoms read left to right. `D { k }` is the k-th
/// power of the (invertible, self-adjoint) operator, `AbsD { k }` the k-th
/// power of its absolute value, `Grading` the Z/2 grading. `Alg` letters
/// carry an integer twist decoration: the atom denotes `sigma^s(a)` (or its
/// adjoint when `adj` is set, in which case applying `sigma` lowers `s`
/// because `sigma(a*) = (sigma^{-1}(a))*`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Grading,
    D { k: i64 },
    AbsD { k: i64 },
    Alg { id: LetterId, sigma: i64, adj: bool },
    Group { id: GroupId, pow: i64 },
}

impl Atom {
    pub fn alg(id: LetterId) -> Atom {
        Atom::Alg {
            id,
            sigma: 0,
            adj: false,
        }
    }

    pub fn alg_star(id: LetterId) -> Atom {
        Atom::Alg {
            id,
            sigma: 0,
            adj: true,
        }
    }

    pub fn group(id: GroupId, pow: i64) -> Atom {
        Atom::Group { id, pow }
    }

    pub fn d(k: i64) -> Atom {
        Atom::D { k }
    }

    pub fn abs_d(k: i64) -> Atom {
        Atom::AbsD { k }
    }

    /// Grading parity of the atom: odd atoms anticommute with the grading.
    pub fn parity(&self, session: &Session) -> Parity {
        match self {
            Atom::Grading => Parity::Even,
            Atom::D { k } => {
                if k.rem_euclid(2) == 1 {
                    Parity::Odd
                } else {
                    Parity::Even
                }
            }
            Atom::AbsD { .. } => Parity::Even,
            Atom::Alg { id, .. } => session.letter(*id).parity,
            Atom::Group { .. } => Parity::Even,
        }
    }

    /// Scaling degree under D -> t D.
    pub fn degree(&self, session: &Session) -> i64 {
        match self {
            Atom::Grading => 0,
            Atom::D { k } | Atom::AbsD { k } => *k,
            Atom::Alg { id, .. } => session.letter(*id).degree,
            Atom::Group { .. } => 0,
        }
    }
}

/// A product of atoms in normal form (see `Expr::normalize`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<Atom>);

impl Word {
    pub fn one() -> Word {
        Word(Vec::new())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total scaling degree of the word.
    pub fn degree(&self, session: &Session) -> i64 {
        self.0.iter().map(|a| a.degree(session)).sum()
    }

    /// Exponent vector of the group letters, ignoring generators with
    /// concrete trivial character.
    pub fn char_trivial(&self, session: &Session) -> bool {
        use std::collections::BTreeMap;
        let mut tally: BTreeMap<GroupId, i64> = BTreeMap::new();
        for a in &self.0 {
            if let Atom::Group { id, pow } = a {
                *tally.entry(*id).or_insert(0) += pow;
            }
        }
        tally.into_iter().all(|(g, p)| session.char_is_trivial(g, p))
    }
}
