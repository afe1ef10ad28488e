//! Numerical evaluation of twisted heat-kernel brackets on the finite model
//! triples: exact simplex integrals by divided differences, epsilon
//! asymptotics with finite-part extraction, the bracket lemmas, contraction
//! cochains, and scale-integral transgression.

pub mod bracket;
pub mod divided;
pub mod fits;
pub mod lemmas;
pub mod transgress;

pub use bracket::{
    commutator_entry, d2_commutator_entry, eval_bracket, eval_bracket_core, eval_bracket_epsilon,
    BracketEntry, BracketValue, JloError,
};
pub use divided::exp_divided_difference;
pub use fits::{fit_constant_term, FitDiagnostics};
pub use lemmas::{
    b_of_j, big_b_of_j, check_derivative_identity, check_merge_unmerge, check_rotation_rescaling,
    check_unit_insertion, commutator_with, contract, family_at, j_cochain, j_cochain_at, j_entries,
    jbar_cochain, k_cochain, EntryParity, Family, FamilyOps,
};
pub use transgress::{transgress, TailDiagnostics};

use models::ModelTriple;
use num_complex::Complex64;

/// Finite-part extraction of a bracket along an epsilon grid.
pub fn extract_constant_term(
    m: &ModelTriple,
    entries: &[BracketEntry],
    eps_grid: &[f64],
    powers: &[f64],
    degree: i64,
) -> Result<(Complex64, FitDiagnostics), JloError> {
    let mut values = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        values.push(eval_bracket_epsilon(m, entries, eps, degree)?.value);
    }
    fit_constant_term(eps_grid, &values, powers)
}
