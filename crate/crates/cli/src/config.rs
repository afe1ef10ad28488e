//! Suite configuration and report schema.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use models::ModelConfig;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("tolerance for `{0}` must be positive")]
    BadTolerance(String),
    #[error("model rejected: {0}")]
    Model(#[from] models::ModelError),
}

pub const SUITES: &[&str] = &[
    "symbolic-identities",
    "hochschild",
    "ansatz-obstruction",
    "jlo-lemmas",
    "constant-term",
    "residue-cocycle",
    "index-pairing",
    "transgression",
    "homotopy",
];

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub model: ModelConfig,
    /// Scaling model used by the crossed-product suites.
    #[serde(default = "default_scaling")]
    pub scaling: ModelConfig,
    /// Conformal perturbation amplitude for the character-equality checks.
    #[serde(default = "default_amplitude")]
    pub conformal_amplitude: f64,
    /// Suites to run; empty means none.
    #[serde(default)]
    pub suites: Vec<String>,
    /// Per-check tolerance overrides.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
}

fn default_scaling() -> ModelConfig {
    ModelConfig::Scaling {
        window_lo: -12,
        window_hi: 12,
        mu: 2.0,
    }
}

fn default_amplitude() -> f64 {
    0.3
}

fn default_seed() -> u64 {
    7
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

impl SuiteConfig {
    pub fn default_circle() -> Self {
        SuiteConfig {
            model: ModelConfig::Circle {
                cutoff: 64,
                inner_fraction: 0.5,
            },
            scaling: default_scaling(),
            conformal_amplitude: default_amplitude(),
            suites: SUITES.iter().map(|s| s.to_string()).collect(),
            tolerances: BTreeMap::new(),
            seed: default_seed(),
            output_dir: default_output(),
        }
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)?;
        let cfg: SuiteConfig = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for s in &self.suites {
            if !SUITES.contains(&s.as_str()) {
                return Err(ConfigError::UnknownSuite(s.clone()));
            }
        }
        for (k, v) in &self.tolerances {
            if !(*v > 0.0) {
                return Err(ConfigError::BadTolerance(k.clone()));
            }
        }
        // Model parameters are validated by building.
        self.model.build()?;
        self.scaling.build()?;
        Ok(())
    }

    pub fn tolerance_for(&self, check: &str, default: f64) -> f64 {
        self.tolerances.get(check).copied().unwrap_or(default)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub suite: String,
    /// Short quoted phrase identifying the statement the check exercises.
    pub anchor: String,
    /// One of "anchored", "trivial", "derived".
    pub provenance: String,
    /// The independent oracle when provenance is "derived".
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<String>,
    pub value: serde_json::Value,
    pub expected: String,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub config: SuiteConfig,
    pub checks: Vec<CheckResult>,
    pub passed: usize,
    pub failed: usize,
}
