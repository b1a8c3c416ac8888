//! Numerical evaluators of the non-asymptotic theory: the error recursion,
//! the recursive-envelope bound, the explicit convergence-rate bound with its
//! sub-exponential, bias, and noise terms, decay-exponent fitting, and the
//! Monte-Carlo verification of the AR(1) drift closed form.

mod bounds;
mod psi;
mod slope;
mod verify;

pub use bounds::{
    delta_recursion, proposition_envelope, theorem_bound, TheoremBound, TheoremBoundEval,
};
pub use psi::{harmonic_or_psi, psi, psi_y};
pub use slope::{fit_decay_exponent, ErrorCurve, SlopeFit};
pub use verify::{verify_ar1_drift, DriftCheck};

use thiserror::Error;

use crate::schedules::{ScheduleParams, UncertaintyParams};

#[derive(Debug, Error)]
pub enum TheoryError {
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("not enough points in the tail window: {got} (need >= 5)")]
    TooFewPoints { got: usize },
}

/// Constants of the convergence theory feeding the bound evaluators.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundParams {
    /// Quasi-strong convexity constant, > 0.
    pub mu: f64,
    /// Dependence constant, >= 0.
    pub d_nu: f64,
    /// Bias constant, >= 0.
    pub b_nu: f64,
    /// Expected-smoothness constant, > 0.
    pub c_kappa: f64,
    /// Initial squared error.
    pub delta0: f64,
    /// Gradient Lipschitz constant; only used to convert squared-parameter
    /// error into an objective gap `F-gap <= c_grad * delta / 2`.
    pub c_grad: Option<f64>,
    /// Hessian Lipschitz constant; carried for completeness.
    pub c_grad_prime: Option<f64>,
    pub uncertainty: UncertaintyParams,
    pub schedule: ScheduleParams,
}

impl BoundParams {
    pub fn validate(&self) -> Result<(), TheoryError> {
        if !(self.mu > 0.0) {
            return Err(TheoryError::InvalidInput(format!("mu must be > 0, got {}", self.mu)));
        }
        for (name, v) in [
            ("d_nu", self.d_nu),
            ("b_nu", self.b_nu),
            ("delta0", self.delta0),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(TheoryError::InvalidInput(format!("{name} must be >= 0, got {v}")));
            }
        }
        if !(self.c_kappa > 0.0) {
            return Err(TheoryError::InvalidInput(format!(
                "c_kappa must be > 0, got {}",
                self.c_kappa
            )));
        }
        self.schedule
            .validate()
            .map_err(|e| TheoryError::InvalidInput(e.to_string()))?;
        self.uncertainty
            .validate()
            .map_err(|e| TheoryError::InvalidInput(e.to_string()))?;
        Ok(())
    }

    /// Dependence-penalized convexity constant
    /// `mu_nu = mu - 1{rho=0} 2 D_nu C_rho^-nu`; positivity is the
    /// convergence hypothesis, checked by callers.
    pub fn mu_nu(&self) -> f64 {
        let penalty = if self.schedule.rho == 0.0 {
            2.0 * self.d_nu * (self.schedule.c_rho as f64).powf(-self.uncertainty.nu)
        } else {
            0.0
        };
        self.mu - penalty
    }

    /// `C_delta = max{1, 2 C_kappa^2, (mu_nu/2)^2, 2*1{rho>0} D_nu}` from the
    /// recursion-envelope proof.
    pub fn c_delta(&self) -> f64 {
        let mut c = 1.0f64;
        c = c.max(2.0 * self.c_kappa * self.c_kappa);
        c = c.max((self.mu_nu() / 2.0).powi(2));
        if self.schedule.rho > 0.0 {
            c = c.max(2.0 * self.d_nu);
        }
        c
    }

    /// Objective gap implied by a squared-error bound when the gradient
    /// Lipschitz constant is known.
    pub fn objective_gap(&self, delta: f64) -> Option<f64> {
        self.c_grad.map(|c| c * delta / 2.0)
    }
}

/// Free-function form of [`BoundParams::mu_nu`].
pub fn mu_nu(p: &BoundParams) -> f64 {
    p.mu_nu()
}
