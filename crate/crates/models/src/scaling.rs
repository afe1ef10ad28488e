//! The geometric-scaling crossed product model: D e_k = mu^k e_k on a
//! window of exponents, the unitary is the down-shift (so U D U* = mu D
//! exactly away from the wrap-around collar), and the algebra consists of
//! finitely supported diagonal functions carried by the inner window.

use std::collections::BTreeMap;

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::linalg::{self, CMat};
use crate::triple::{DOperator, ModelError, ModelKind, ModelTriple, Unitary};

pub fn build_scaling(window_lo: i64, window_hi: i64, mu: f64) -> Result<ModelTriple, ModelError> {
    if window_hi - window_lo < 8 {
        return Err(ModelError::WindowTooSmall);
    }
    if !(mu > 1.0) {
        return Err(ModelError::BadScalingBase(mu));
    }
    let dim = (window_hi - window_lo + 1) as usize;
    let d = Array1::from_shape_fn(dim, |i| mu.powi((window_lo + i as i64) as i32));
    // Down-shift with cyclic wrap on the collar (keeps U unitary); the
    // scaling relation is exact except at the wrap row.
    let mut u = Array2::from_elem((dim, dim), linalg::czero());
    for col in 1..dim {
        u[[col - 1, col]] = linalg::cone();
    }
    u[[dim - 1, 0]] = linalg::cone();
    let margin = (dim / 5).max(2);
    let inner_lo = margin;
    let inner_hi = dim - margin;
    let mut unitaries = BTreeMap::new();
    unitaries.insert(
        "U".to_string(),
        Unitary {
            mat: u,
            mu,
            shift: -1,
        },
    );
    Ok(ModelTriple {
        kind: ModelKind::Scaling {
            lo: window_lo,
            hi: window_hi,
            mu,
        },
        outer_dim: dim,
        inner_lo,
        inner_hi,
        d_op: DOperator::Diagonal(d),
        grading: None,
        algebra: BTreeMap::new(),
        unitaries,
        boundary_tol: 1e-10,
    })
}

impl ModelTriple {
    /// Diagonal function with finite support `(exponent, value)`; the
    /// support must lie in the inner window.
    pub fn scaling_function(&self, support: &[(i64, Complex64)]) -> Result<CMat, ModelError> {
        let (lo, _hi, _mu) = match self.kind {
            ModelKind::Scaling { lo, hi, mu } => (lo, hi, mu),
            _ => return Err(ModelError::BadMass("not a scaling model".into())),
        };
        let dim = self.outer_dim;
        let mut m = Array2::from_elem((dim, dim), linalg::czero());
        for &(k, v) in support {
            let idx = k - lo;
            if idx < self.inner_lo as i64 || idx >= self.inner_hi as i64 {
                return Err(ModelError::SupportOutsideInner);
            }
            m[[idx as usize, idx as usize]] += v;
        }
        Ok(m)
    }

    /// Power of the shift unitary with its character and net index shift.
    pub fn scaling_unitary_pow(&self, m: i64) -> Result<Unitary, ModelError> {
        let u = self
            .unitaries
            .get("U")
            .ok_or_else(|| ModelError::BadMass("no scaling unitary".into()))?;
        let dim = self.outer_dim;
        let mut mat = linalg::identity(dim);
        let base = if m >= 0 {
            u.mat.clone()
        } else {
            linalg::adjoint(&u.mat)
        };
        for _ in 0..m.unsigned_abs() {
            mat = linalg::matmul(&mat, &base);
        }
        Ok(Unitary {
            mat,
            mu: u.mu.powi(m as i32),
            shift: -m,
        })
    }
}
