//! Exact symbolic calculus for operator algebras twisted by an
//! automorphism: words in algebra letters, scaling unitaries, powers of an
//! invertible self-adjoint operator D and of |D|, and a grading, with
//! coefficients in an exact ring. Equality of expressions and of formal
//! residue/weighted traces is decided by rewriting to a canonical form.

pub mod atom;
pub mod coeff;
pub mod expr;
pub mod ops;
pub mod parse;
pub mod print;
pub mod session;
pub mod trace;

pub use atom::{Atom, Word};
pub use coeff::{Coeff, GaussRat, GroupId, Monomial};
pub use expr::Expr;
pub use ops::{
    alpha_conj, binomial, derivative_iterate, expand_abs_power, higher_twisted_commutator,
    sigma_capital, sigma_capital_identity_residual, twisted_commutator, AbsPowerExpansion,
    CommutatorWith, ExpandVariant, ExpansionTerm, HigherForm, OpError, SExp,
};
pub use parse::{parse_expr, parse_trace_expr, ParseError};
pub use print::{expr_string, trace_string, word_string};
pub use session::{
    CharValue, DerivKind, GroupInfo, LetterId, LetterInfo, Parity, RuleSet, Session, SigmaMode,
};
pub use trace::{TraceExpr, TraceKind};
