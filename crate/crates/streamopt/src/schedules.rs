//! Time-varying mini-batch schedules.
//!
//! Everything downstream (generators, optimizer, bound evaluators, harness) is
//! driven by the same three sequences: the batch sizes `n_t = ceil(C_rho t^rho)`,
//! the learning rates `gamma_t = C_gamma n_t^beta t^-alpha`, and the
//! uncertainty decays `nu_t = n_t^-nu`, `sigma_t = C_sigma n_t^-sigma`.
//!
//! All functions here are pure; schedule validity for the convergence theory
//! (the `alpha - rho*beta` window) is deliberately *not* enforced so that
//! invalid schedules can still be executed to reproduce divergence behaviour.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Guard subtracted (relatively) before `ceil` so that products that are exact
/// integers in real arithmetic do not round up from floating-point dust.
const CEIL_GUARD: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum ScheduleError {
    #[error("schedule field `{field}` is invalid: {reason}")]
    InvalidField { field: &'static str, reason: String },
}

/// Hyperparameters of the streaming schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduleParams {
    /// Learning-rate scale, > 0.
    pub c_gamma: f64,
    /// Learning-rate exponent in (0, 1).
    pub alpha: f64,
    /// Batch-weight exponent in [0, 1].
    pub beta: f64,
    /// Streaming batch size, integer >= 1.
    pub c_rho: u64,
    /// Streaming rate in [0, 1).
    pub rho: f64,
}

impl Default for ScheduleParams {
    /// Classical online SGD: unit batches, `gamma_t = t^{-2/3}`.
    fn default() -> Self {
        ScheduleParams {
            c_gamma: 1.0,
            alpha: 2.0 / 3.0,
            beta: 0.0,
            c_rho: 1,
            rho: 0.0,
        }
    }
}

impl ScheduleParams {
    pub fn validate(&self) -> Result<(), ScheduleError> {
        let field = |field, reason: String| Err(ScheduleError::InvalidField { field, reason });
        if !(self.c_gamma > 0.0) || !self.c_gamma.is_finite() {
            return field("c_gamma", format!("must be positive, got {}", self.c_gamma));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return field("alpha", format!("must lie in (0,1), got {}", self.alpha));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return field("beta", format!("must lie in [0,1], got {}", self.beta));
        }
        if self.c_rho < 1 {
            return field("c_rho", format!("must be >= 1, got {}", self.c_rho));
        }
        if !(0.0..1.0).contains(&self.rho) {
            return field("rho", format!("must lie in [0,1), got {}", self.rho));
        }
        Ok(())
    }

    /// Theorem hypothesis `alpha - rho*beta` in (1/2, 1). Checked by the theory
    /// and harness layers; the optimizer runs any schedule.
    pub fn is_theorem_valid(&self) -> bool {
        let window = self.alpha - self.rho * self.beta;
        window > 0.5 && window < 1.0
    }

    /// Mini-batch size `n_t = ceil(C_rho t^rho)`.
    pub fn batch_size(&self, t: u64) -> u64 {
        assert!(t >= 1, "batch index must be >= 1");
        let x = self.c_rho as f64 * (t as f64).powf(self.rho);
        (x * (1.0 - CEIL_GUARD)).ceil() as u64
    }

    /// Real-valued batch size `C_rho t^rho` (no ceiling), as used inside the
    /// appendix bound algebra.
    pub fn batch_size_real(&self, t: u64) -> f64 {
        assert!(t >= 1, "batch index must be >= 1");
        self.c_rho as f64 * (t as f64).powf(self.rho)
    }

    /// Accumulated observation count `N_t = sum_{i<=t} n_i`, with `N_0 = 0`.
    pub fn cumulative_count(&self, t: u64) -> u64 {
        (1..=t).map(|i| self.batch_size(i)).sum()
    }

    /// Learning rate `gamma_t = C_gamma n_t^beta t^-alpha`.
    pub fn learning_rate(&self, t: u64, n_t: u64) -> f64 {
        assert!(t >= 1 && n_t >= 1, "learning_rate requires t >= 1, n_t >= 1");
        self.c_gamma * (n_t as f64).powf(self.beta) * (t as f64).powf(-self.alpha)
    }
}

/// Exponents and scale of the dependence / gradient-noise decay sequences.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyParams {
    /// Dependence exponent, > 0. `nu < 1/2` models long-range dependence.
    pub nu: f64,
    /// Noise exponent in [0, 1/2]; 1/2 is the i.i.d. case.
    pub sigma: f64,
    /// Noise scale, >= 0.
    pub c_sigma: f64,
}

impl UncertaintyParams {
    pub fn validate(&self) -> Result<(), ScheduleError> {
        let field = |field, reason: String| Err(ScheduleError::InvalidField { field, reason });
        if !(self.nu > 0.0) || !self.nu.is_finite() {
            return field("nu", format!("must be positive, got {}", self.nu));
        }
        if !(0.0..=0.5).contains(&self.sigma) {
            return field("sigma", format!("must lie in [0,1/2], got {}", self.sigma));
        }
        if !(self.c_sigma >= 0.0) || !self.c_sigma.is_finite() {
            return field("c_sigma", format!("must be >= 0, got {}", self.c_sigma));
        }
        Ok(())
    }

    /// Dependence decay `nu_t = n_t^-nu`, in (0, 1].
    pub fn dependence_decay(&self, n_t: f64) -> f64 {
        debug_assert!(n_t >= 1.0);
        n_t.powf(-self.nu)
    }

    /// Gradient-noise decay `sigma_t = C_sigma n_t^-sigma`.
    pub fn noise_decay(&self, n_t: f64) -> f64 {
        debug_assert!(n_t >= 1.0);
        self.c_sigma * n_t.powf(-self.sigma)
    }
}
