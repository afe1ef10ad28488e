//! Session state: declared letters, group generators, rewrite rule flags.
//!
//! A session fixes how the twist automorphism acts. In `Crossed` mode the
//! automorphism is resolved on monomials through the group characters; in
//! `Abstract` mode it is kept as an integer decoration on algebra letters
//! (and character factors are still collected when group letters appear).

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;

use crate::coeff::{Coeff, GroupId};

pub type LetterId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SigmaMode {
    Abstract,
    Crossed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Character value attached to a group generator.
#[derive(Clone, Debug, PartialEq)]
pub enum CharValue {
    /// Formal positive symbol `mu_<name>`.
    Symbol,
    /// Concrete positive rational.
    Rational(BigRational),
}

#[derive(Clone, Debug)]
pub struct LetterInfo {
    pub name: String,
    pub parity: Parity,
    /// Scaling degree under D -> t D; plain algebra letters have degree 0,
    /// derived letters inherit the degree of their defining bracket.
    pub degree: i64,
}

#[derive(Clone, Debug)]
pub struct GroupInfo {
    pub name: String,
    pub character: CharValue,
}

/// Toggleable trace rules.
#[derive(Clone, Copy, Debug, Default)]
pub struct RuleSet {
    /// Delete residue summands whose total group character is nontrivial.
    pub selberg: bool,
    /// Quotient residue summands by a simultaneous shift of all twist
    /// decorations (the residue functional is invariant under the twist).
    pub sigma_invariance: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum DerivKind {
    /// Bounded derivative `[|D|, .]` iterates.
    Delta,
    /// `[D^2, .]`-type iterates.
    Nabla,
    /// Declared value of the bracket `[D, .]`.
    DComm,
}

#[derive(Clone, Debug, Default)]
pub struct Session {
    pub mode: Option<SigmaMode>,
    pub rules: RuleSet,
    letters: Vec<LetterInfo>,
    groups: Vec<GroupInfo>,
    letter_index: BTreeMap<String, LetterId>,
    group_index: BTreeMap<String, GroupId>,
    derived: BTreeMap<(LetterId, DerivKind, u32), LetterId>,
    /// Letters with a declared `[D, a]` value, rewritten during normalization.
    commutator_rule: BTreeMap<LetterId, LetterId>,
}

impl Session {
    pub fn abstract_mode() -> Self {
        Session {
            mode: Some(SigmaMode::Abstract),
            ..Session::default()
        }
    }

    pub fn crossed() -> Self {
        Session {
            mode: Some(SigmaMode::Crossed),
            ..Session::default()
        }
    }

    pub fn mode(&self) -> SigmaMode {
        self.mode.unwrap_or(SigmaMode::Abstract)
    }

    pub fn declare_letter(&mut self, name: &str) -> LetterId {
        self.declare_letter_full(name, Parity::Even, 0)
    }

    pub fn declare_letter_full(&mut self, name: &str, parity: Parity, degree: i64) -> LetterId {
        if let Some(&id) = self.letter_index.get(name) {
            return id;
        }
        let id = self.letters.len() as LetterId;
        self.letters.push(LetterInfo {
            name: name.to_string(),
            parity,
            degree,
        });
        self.letter_index.insert(name.to_string(), id);
        id
    }

    pub fn declare_group(&mut self, name: &str, character: CharValue) -> GroupId {
        if let Some(&id) = self.group_index.get(name) {
            return id;
        }
        let id = self.groups.len() as GroupId;
        self.groups.push(GroupInfo {
            name: name.to_string(),
            character,
        });
        self.group_index.insert(name.to_string(), id);
        id
    }

    /// Declares `[D, base] = value`; normalization then pushes positive
    /// D-powers to the right across `base`.
    pub fn declare_commutator(&mut self, base: LetterId, value: LetterId) {
        self.commutator_rule.insert(base, value);
    }

    pub fn commutator_value(&self, base: LetterId) -> Option<LetterId> {
        self.commutator_rule.get(&base).copied()
    }

    pub fn has_commutator_rules(&self) -> bool {
        !self.commutator_rule.is_empty()
    }

    /// Fresh derived letter for `kind^order(base)`, memoized per session.
    pub fn derived_letter(&mut self, base: LetterId, kind: DerivKind, order: u32) -> LetterId {
        if order == 0 {
            return base;
        }
        if let Some(&id) = self.derived.get(&(base, kind, order)) {
            return id;
        }
        let base_info = self.letter(base).clone();
        let tag = match kind {
            DerivKind::Delta => "del",
            DerivKind::Nabla => "nab",
            DerivKind::DComm => "d",
        };
        let name = if order == 1 {
            format!("{}[{}]", tag, base_info.name)
        } else {
            format!("{}^{}[{}]", tag, order, base_info.name)
        };
        let parity = match kind {
            // [|D|, .] and [D^2, .] preserve parity; [D, .] flips it.
            DerivKind::Delta | DerivKind::Nabla => base_info.parity,
            DerivKind::DComm => match base_info.parity {
                Parity::Even => Parity::Odd,
                Parity::Odd => Parity::Even,
            },
        };
        let degree = base_info.degree
            + match kind {
                DerivKind::Delta => order as i64,
                DerivKind::Nabla => 2 * order as i64,
                DerivKind::DComm => order as i64,
            };
        let id = self.declare_letter_full(&name, parity, degree);
        self.derived.insert((base, kind, order), id);
        id
    }

    pub fn letter(&self, id: LetterId) -> &LetterInfo {
        &self.letters[id as usize]
    }

    pub fn group(&self, id: GroupId) -> &GroupInfo {
        &self.groups[id as usize]
    }

    pub fn letter_id(&self, name: &str) -> Option<LetterId> {
        self.letter_index.get(name).copied()
    }

    pub fn group_id(&self, name: &str) -> Option<GroupId> {
        self.group_index.get(name).copied()
    }

    pub fn group_name(&self, id: GroupId) -> &str {
        &self.groups[id as usize].name
    }

    /// Character of `g^pow` as an exact coefficient.
    pub fn char_pow(&self, g: GroupId, pow: i64) -> Coeff {
        match &self.groups[g as usize].character {
            CharValue::Symbol => Coeff::mu(g, pow),
            CharValue::Rational(r) => {
                let mut acc = BigRational::one();
                let (base, n) = if pow >= 0 {
                    (r.clone(), pow)
                } else {
                    (r.recip(), -pow)
                };
                for _ in 0..n {
                    acc *= &base;
                }
                Coeff::from_rational(acc)
            }
        }
    }

    /// True when `g^pow` has trivial character.
    pub fn char_is_trivial(&self, g: GroupId, pow: i64) -> bool {
        if pow == 0 {
            return true;
        }
        match &self.groups[g as usize].character {
            CharValue::Symbol => false,
            CharValue::Rational(r) => r.is_one(),
        }
    }
}
