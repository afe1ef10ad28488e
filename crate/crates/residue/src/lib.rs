//! Closed-form zeta functions and residue functionals for the model
//! triples; the residue cocycle with exact term certification; character
//! pairings and Fredholm indices.

pub mod bandpoly;
pub mod chern;
pub mod functional;
pub mod gimel;
pub mod zeta;

pub use bandpoly::{BandPoly, Poly};
pub use chern::{
    chern_phase, conformal_character_pair, family_pairing, fredholm_index,
    homotopy_pairing_scan, tail_corrected_trace, IndexDiagnostics,
};
pub use functional::{
    gamma_weighted_residue, heat_trace, residue_circle_exact, residue_circle_limit,
    residue_scaling, two_sided_lattice, zeta_circle, zeta_scaling, CircleSymbol, ResidueError,
};
pub use gimel::{gimel_circle, tail_certified, GimelTermReport, GimelValue};
