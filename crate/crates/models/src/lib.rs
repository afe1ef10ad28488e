//! Concrete finite-truncation model triples with exact structural data:
//! the antiperiodic circle (with conformal perturbation), the geometric
//! scaling crossed product, graded and invertible doubles, and regularity
//! probes. All operators are plain dense complex matrices; the two-tier
//! (inner/outer) window contract confines truncation artifacts to a collar.

pub mod circle;
pub mod config;
pub mod doubles;
pub mod linalg;
pub mod probes;
pub mod scaling;
pub mod triple;

pub use circle::{
    build_circle, circle_shift, circle_trig_poly, conformal_perturb, CirclePerturbation,
    ConformalModel,
};
pub use config::{export_matrix_bin, export_matrix_csv, BuiltModel, HCoeff, ModelConfig};
pub use doubles::{graded_double, invertible_double, Mass};
pub use linalg::{CMat, CVec};
pub use probes::{lipschitz_probe, twisted_lipschitz_norm, DecayReport};
pub use scaling::build_scaling;
pub use triple::{DOperator, ModelError, ModelKind, ModelTriple, Unitary};
