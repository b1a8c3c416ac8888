//! AR(1) least squares, well-specified and misspecified oracles.

use crate::streams::StreamBatch;

use super::{check_dim, LossModel, ModelError};

/// Squared-loss AR(1) fit. The gradient needs only the batch; the objective
/// and optimum oracles are available when the generating process is known.
#[derive(Debug, Clone)]
pub struct Ar1LeastSquares {
    /// True AR coefficient of the generating process, when known.
    pub theta_star: Option<f64>,
    /// Innovation variance of the generating process.
    pub sigma_eps2: f64,
}

impl Ar1LeastSquares {
    pub fn new(theta_star: Option<f64>, sigma_eps2: f64) -> Self {
        Ar1LeastSquares { theta_star, sigma_eps2 }
    }
}

impl LossModel for Ar1LeastSquares {
    fn dimension(&self) -> usize {
        1
    }

    /// `-(2/n) sum_i lag_i (x_i - theta lag_i)`.
    fn gradient(&self, batch: &StreamBatch, theta: &[f64]) -> Result<Vec<f64>, ModelError> {
        check_dim(1, theta)?;
        let th = theta[0];
        let n = batch.len();
        let mut acc = 0.0;
        for i in 0..n {
            let lag = batch.lag(i);
            acc += lag * (batch.value(i) - th * lag);
        }
        Ok(vec![-2.0 * acc / n as f64])
    }

    fn objective(&self, theta: &[f64]) -> Option<f64> {
        self.theta_star
            .and_then(|ts| ar1_objective(theta[0], ts, self.sigma_eps2).ok())
    }

    fn optimum(&self) -> Option<Vec<f64>> {
        self.theta_star.map(|ts| vec![ts])
    }
}

/// Population objective `F(theta) = sigma_eps^2 (theta* - theta)^2 / (1 - theta*^2) + sigma_eps^2`
/// of the well-specified AR(1) squared loss; minimized at `theta = theta*`.
pub fn ar1_objective(theta: f64, theta_star: f64, sigma_eps2: f64) -> Result<f64, ModelError> {
    if theta_star.abs() >= 1.0 {
        return Err(ModelError::InvalidParameter(format!(
            "ar1_objective requires |theta_star| < 1, got {theta_star}"
        )));
    }
    let d = theta_star - theta;
    Ok(sigma_eps2 * d * d / (1.0 - theta_star * theta_star) + sigma_eps2)
}

/// Pseudo-true AR(1) coefficient when fitting an MA(1) process:
/// `phi* / (1 + phi*^2)`, always inside (-1/2, 1/2).
pub fn ma1_pseudo_optimum(phi_star: f64) -> f64 {
    phi_star / (1.0 + phi_star * phi_star)
}
