//! Loss models: averaged mini-batch gradients with objective and optimum
//! oracles where closed forms exist.

mod ar;
mod arch;
mod median;

pub use ar::{ar1_objective, ma1_pseudo_optimum, Ar1LeastSquares};
pub use arch::{ArArchJoint, ArchParams, ArchQml};
pub use median::{geometric_median_gradient, weiszfeld, GeometricMedian, WeiszfeldResult};

use thiserror::Error;

use crate::streams::StreamBatch;

/// Conditional-variance floor below which a QML gradient evaluation is
/// reported as an error (the iterate left the admissible region).
pub const VARIANCE_FLOOR: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("conditional variance fell to {sigma2} (<= {VARIANCE_FLOOR}) at observation {index}")]
    VarianceFloor { index: usize, sigma2: f64 },
    #[error("batch is missing required context: {0}")]
    MissingContext(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: model is {model}, got theta of length {got}")]
    DimensionMismatch { model: usize, got: usize },
}

/// A gradient provider: batch + parameter -> averaged stochastic gradient
/// `n_t^{-1} sum_i grad f_{t,i}(theta)`. Objective and optimum are exposed
/// where the model knows a closed form.
pub trait LossModel: Send + Sync {
    fn dimension(&self) -> usize;

    /// Exact average of the per-observation gradients; permutation invariant.
    fn gradient(&self, batch: &StreamBatch, theta: &[f64]) -> Result<Vec<f64>, ModelError>;

    fn objective(&self, _theta: &[f64]) -> Option<f64> {
        None
    }

    fn optimum(&self) -> Option<Vec<f64>> {
        None
    }
}

pub(crate) fn check_dim(model: usize, theta: &[f64]) -> Result<(), ModelError> {
    if theta.len() != model {
        Err(ModelError::DimensionMismatch { model, got: theta.len() })
    } else {
        Ok(())
    }
}
