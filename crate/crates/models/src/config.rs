//! Model configuration (JSON) and matrix export.
//!
//! Binary export format `NCM1`: magic bytes `NCM1`, then rows and cols as
//! little-endian u64, then row-major entries as little-endian f64 pairs
//! (re, im).

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circle::{build_circle, conformal_perturb, CirclePerturbation, ConformalModel};
use crate::linalg::CMat;
use crate::scaling::build_scaling;
use crate::triple::{ModelError, ModelTriple};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HCoeff {
    pub k: i64,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelConfig {
    Circle {
        cutoff: i64,
        #[serde(default = "default_inner_fraction")]
        inner_fraction: f64,
    },
    ConformalCircle {
        cutoff: i64,
        #[serde(default = "default_inner_fraction")]
        inner_fraction: f64,
        h_coeffs: Vec<HCoeff>,
    },
    Scaling {
        window_lo: i64,
        window_hi: i64,
        mu: f64,
    },
}

fn default_inner_fraction() -> f64 {
    0.5
}

pub enum BuiltModel {
    Plain(ModelTriple),
    Conformal(Box<ConformalModel>),
}

impl ModelConfig {
    pub fn build(&self) -> Result<BuiltModel, ModelError> {
        match self {
            ModelConfig::Circle {
                cutoff,
                inner_fraction,
            } => Ok(BuiltModel::Plain(build_circle(*cutoff, *inner_fraction)?)),
            ModelConfig::ConformalCircle {
                cutoff,
                inner_fraction,
                h_coeffs,
            } => {
                let base = build_circle(*cutoff, *inner_fraction)?;
                let pert = CirclePerturbation {
                    coeffs: h_coeffs
                        .iter()
                        .map(|c| (c.k, Complex64::new(c.re, c.im)))
                        .collect(),
                };
                Ok(BuiltModel::Conformal(Box::new(conformal_perturb(
                    &base, &pert,
                )?)))
            }
            ModelConfig::Scaling {
                window_lo,
                window_hi,
                mu,
            } => Ok(BuiltModel::Plain(build_scaling(
                *window_lo, *window_hi, *mu,
            )?)),
        }
    }

    /// Doubles the outer truncation, keeping everything else; used by the
    /// stability harness.
    pub fn doubled(&self) -> ModelConfig {
        match self {
            ModelConfig::Circle {
                cutoff,
                inner_fraction,
            } => ModelConfig::Circle {
                cutoff: cutoff * 2,
                inner_fraction: inner_fraction / 2.0,
            },
            ModelConfig::ConformalCircle {
                cutoff,
                inner_fraction,
                h_coeffs,
            } => ModelConfig::ConformalCircle {
                cutoff: cutoff * 2,
                inner_fraction: inner_fraction / 2.0,
                h_coeffs: h_coeffs.clone(),
            },
            ModelConfig::Scaling {
                window_lo,
                window_hi,
                mu,
            } => ModelConfig::Scaling {
                window_lo: window_lo * 2,
                window_hi: window_hi * 2,
                mu: *mu,
            },
        }
    }
}

pub fn export_matrix_csv(path: &Path, m: &CMat) -> std::io::Result<()> {
    let mut f = std::fs::File::create(path)?;
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|j| format!("{:+.17e}{:+.17e}i", m[[i, j]].re, m[[i, j]].im))
            .collect();
        writeln!(f, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn export_matrix_bin(path: &Path, m: &CMat) -> std::io::Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(b"NCM1")?;
    f.write_all(&(m.nrows() as u64).to_le_bytes())?;
    f.write_all(&(m.ncols() as u64).to_le_bytes())?;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            f.write_all(&m[[i, j]].re.to_le_bytes())?;
            f.write_all(&m[[i, j]].im.to_le_bytes())?;
        }
    }
    Ok(())
}
