//! Finite-truncation model triples with a two-tier window contract: the
//! defining relations hold exactly on the inner window, deviations are
//! confined to the outer collar.

use std::collections::BTreeMap;

use ndarray::Array1;
use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{self, CMat};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("cutoff too small: {0}")]
    CutoffTooSmall(i64),
    #[error("window too small")]
    WindowTooSmall,
    #[error("scaling base must exceed 1, got {0}")]
    BadScalingBase(f64),
    #[error("support outside the inner window")]
    SupportOutsideInner,
    #[error("perturbation is not self-adjoint")]
    NotSelfAdjoint,
    #[error("model must be odd (ungraded) here")]
    AlreadyGraded,
    #[error("model must be graded here")]
    NotGraded,
    #[error("mass operator fails its contract: {0}")]
    BadMass(String),
    #[error("operator is not invertible: min |d| = {0}")]
    NotInvertible(f64),
}

/// The operator of the triple: either genuinely diagonal, or a matrix whose
/// square is diagonal (the doubled models).
#[derive(Clone, Debug)]
pub enum DOperator {
    Diagonal(Array1<f64>),
    /// Full matrix together with the diagonal of its square.
    Matrix { mat: CMat, d2: Array1<f64> },
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelKind {
    Circle { cutoff: i64 },
    Scaling { lo: i64, hi: i64, mu: f64 },
    GradedDouble,
    InvertibleDouble,
}

#[derive(Clone)]
pub struct Unitary {
    pub mat: CMat,
    /// Scaling character of the unitary.
    pub mu: f64,
    /// Net index shift of the underlying permutation, used for structural
    /// support pruning.
    pub shift: i64,
}

#[derive(Clone)]
pub struct ModelTriple {
    pub kind: ModelKind,
    pub outer_dim: usize,
    /// Inner window `[inner_lo, inner_hi)`.
    pub inner_lo: usize,
    pub inner_hi: usize,
    pub d_op: DOperator,
    pub grading: Option<Array1<f64>>,
    pub algebra: BTreeMap<String, CMat>,
    pub unitaries: BTreeMap<String, Unitary>,
    pub boundary_tol: f64,
}

impl ModelTriple {
    pub fn dim(&self) -> usize {
        self.outer_dim
    }

    pub fn inner_dim(&self) -> usize {
        self.inner_hi - self.inner_lo
    }

    /// Diagonal of D^2.
    pub fn d2_diag(&self) -> Array1<f64> {
        match &self.d_op {
            DOperator::Diagonal(d) => d.mapv(|x| x * x),
            DOperator::Matrix { d2, .. } => d2.clone(),
        }
    }

    pub fn d_matrix(&self) -> CMat {
        match &self.d_op {
            DOperator::Diagonal(d) => linalg::from_diag(d),
            DOperator::Matrix { mat, .. } => mat.clone(),
        }
    }

    pub fn d_diag(&self) -> Option<&Array1<f64>> {
        match &self.d_op {
            DOperator::Diagonal(d) => Some(d),
            DOperator::Matrix { .. } => None,
        }
    }

    /// |D|^p as a matrix (diagonal in every model: |D| = sqrt(D^2)).
    pub fn abs_d_pow(&self, p: f64) -> CMat {
        let d2 = self.d2_diag();
        linalg::from_diag(&d2.mapv(|x| x.powf(p / 2.0)))
    }

    /// Sign/phase operator F = D |D|^{-1}.
    pub fn phase(&self) -> CMat {
        match &self.d_op {
            DOperator::Diagonal(d) => linalg::from_diag(&d.mapv(|x| x.signum())),
            DOperator::Matrix { mat, d2 } => {
                let inv_abs = linalg::from_diag(&d2.mapv(|x| 1.0 / x.sqrt()));
                linalg::matmul(mat, &inv_abs)
            }
        }
    }

    pub fn min_abs_d(&self) -> f64 {
        self.d2_diag().iter().fold(f64::INFINITY, |m, &x| m.min(x)).sqrt()
    }

    pub fn grading_matrix(&self) -> Option<CMat> {
        self.grading.as_ref().map(linalg::from_diag)
    }

    /// Sup-norm of the restriction to the inner window.
    pub fn inner_norm(&self, a: &CMat) -> f64 {
        let c = linalg::compress(a, self.inner_lo, self.inner_hi);
        linalg::op_norm(&c)
    }

    /// Trace over the inner window diagonal.
    pub fn inner_trace(&self, a: &CMat) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in self.inner_lo..self.inner_hi {
            acc += a[[i, i]];
        }
        acc
    }

    /// Validates the structural contracts: unitarity and the scaling
    /// relation on the inner window.
    pub fn validate(&self) -> Result<(), ModelError> {
        let min = self.min_abs_d();
        if !(min > 0.0) {
            return Err(ModelError::NotInvertible(min));
        }
        let d = self.d_matrix();
        for u in self.unitaries.values() {
            let uhu = linalg::matmul(&linalg::adjoint(&u.mat), &u.mat);
            let dev = linalg::sub(&uhu, &linalg::identity(self.outer_dim));
            if self.inner_norm(&dev) > 1e-12 {
                return Err(ModelError::BadMass("unitarity fails on inner window".into()));
            }
            let udu = linalg::matmul(&linalg::matmul(&u.mat, &d), &linalg::adjoint(&u.mat));
            let expect = linalg::scale(&d, Complex64::new(u.mu, 0.0));
            let dev = linalg::sub(&udu, &expect);
            if self.inner_norm(&dev) > self.boundary_tol {
                return Err(ModelError::BadMass(format!(
                    "scaling relation deviates by {} on inner window",
                    self.inner_norm(&dev)
                )));
            }
        }
        Ok(())
    }
}
