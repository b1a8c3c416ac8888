//! ARCH(1) quasi-maximum-likelihood and the AR(1)-ARCH(1) composite.

use serde::{Deserialize, Serialize};

use crate::streams::StreamBatch;

use super::{check_dim, LossModel, ModelError, VARIANCE_FLOOR};

/// ARCH(1) parameters; `alpha0 > 0`, `alpha1 >= 0` keeps the conditional
/// variance positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArchParams {
    pub alpha0: f64,
    pub alpha1: f64,
}

impl ArchParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.alpha0 > 0.0) {
            return Err(ModelError::InvalidParameter(format!(
                "alpha0 must be positive, got {}",
                self.alpha0
            )));
        }
        if !(self.alpha1 >= 0.0) {
            return Err(ModelError::InvalidParameter(format!(
                "alpha1 must be nonnegative, got {}",
                self.alpha1
            )));
        }
        Ok(())
    }
}

/// Per-observation QML score `(1, e_lag^2)^T (sigma^2(theta) - e^2) / (2 sigma^4(theta))`
/// with `sigma^2(theta) = theta_0 + theta_1 e_lag^2`.
fn qml_score(
    theta0: f64,
    theta1: f64,
    eps: f64,
    eps_lag: f64,
    index: usize,
) -> Result<(f64, f64), ModelError> {
    let lag2 = eps_lag * eps_lag;
    let sigma2 = theta0 + theta1 * lag2;
    if sigma2 <= VARIANCE_FLOOR {
        return Err(ModelError::VarianceFloor { index, sigma2 });
    }
    let w = (sigma2 - eps * eps) / (2.0 * sigma2 * sigma2);
    Ok((w, w * lag2))
}

/// ARCH(1) QML loss over batches whose observations are the innovations
/// themselves. `theta = (alpha0, alpha1)`.
#[derive(Debug, Clone)]
pub struct ArchQml {
    /// Hold the `alpha0` coordinate fixed during optimization.
    pub freeze_alpha0: bool,
    /// Generating parameters, when known, for the optimum oracle.
    pub truth: Option<ArchParams>,
}

impl ArchQml {
    pub fn new(freeze_alpha0: bool, truth: Option<ArchParams>) -> Self {
        ArchQml { freeze_alpha0, truth }
    }
}

impl LossModel for ArchQml {
    fn dimension(&self) -> usize {
        2
    }

    fn gradient(&self, batch: &StreamBatch, theta: &[f64]) -> Result<Vec<f64>, ModelError> {
        check_dim(2, theta)?;
        let lags = batch
            .lagged_innovation
            .as_ref()
            .ok_or(ModelError::MissingContext("lagged innovations"))?;
        let n = batch.len();
        let (mut g0, mut g1) = (0.0, 0.0);
        for i in 0..n {
            let (a, b) = qml_score(theta[0], theta[1], batch.value(i), lags[i], i)?;
            g0 += a;
            g1 += b;
        }
        let n = n as f64;
        let g0 = if self.freeze_alpha0 { 0.0 } else { g0 / n };
        Ok(vec![g0, g1 / n])
    }

    fn optimum(&self) -> Option<Vec<f64>> {
        self.truth.map(|p| vec![p.alpha0, p.alpha1])
    }
}

/// Joint AR(1)-ARCH(1) loss: squared loss for the AR coefficient plus the QML
/// loss on the residuals `e_s(theta) = X_s - theta X_{s-1}`, with the lagged
/// residual recomputed from the current `theta` so the loss stays a pure
/// function of (batch, theta). `theta = (ar, alpha0, alpha1)`.
#[derive(Debug, Clone)]
pub struct ArArchJoint {
    pub freeze_alpha0: bool,
    pub truth: Option<(f64, ArchParams)>,
}

impl ArArchJoint {
    pub fn new(freeze_alpha0: bool, truth: Option<(f64, ArchParams)>) -> Self {
        ArArchJoint { freeze_alpha0, truth }
    }
}

impl LossModel for ArArchJoint {
    fn dimension(&self) -> usize {
        3
    }

    fn gradient(&self, batch: &StreamBatch, theta: &[f64]) -> Result<Vec<f64>, ModelError> {
        check_dim(3, theta)?;
        let lag2s = batch
            .lagged2
            .as_ref()
            .ok_or(ModelError::MissingContext("second-order lags"))?;
        let th = theta[0];
        let n = batch.len();
        let (mut g_ar, mut g0, mut g1) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let x = batch.value(i);
            let lag = batch.lag(i);
            g_ar += lag * (x - th * lag);
            let resid = x - th * lag;
            let resid_lag = lag - th * lag2s[i];
            let (a, b) = qml_score(theta[1], theta[2], resid, resid_lag, i)?;
            g0 += a;
            g1 += b;
        }
        let n = n as f64;
        let g0 = if self.freeze_alpha0 { 0.0 } else { g0 / n };
        Ok(vec![-2.0 * g_ar / n, g0, g1 / n])
    }

    fn optimum(&self) -> Option<Vec<f64>> {
        self.truth
            .as_ref()
            .map(|(th, p)| vec![*th, p.alpha0, p.alpha1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::tests_support::{finite_difference, random_scalar_batch};
    use rand::SeedableRng;

    fn arch_batch(values: Vec<f64>, lags: Vec<f64>) -> StreamBatch {
        StreamBatch {
            index: 1,
            dim: 1,
            values,
            lagged: lags.clone(),
            lagged2: None,
            lagged_innovation: Some(lags),
        }
    }

    #[test]
    fn score_zero_when_variance_matches() {
        let m = ArchQml::new(false, None);
        // alpha1 = 0: sigma^2 = 1 = eps^2
        let b = arch_batch(vec![1.0], vec![2.0]);
        let g = m.gradient(&b, &[1.0, 0.0]).unwrap();
        assert_eq!(g, vec![0.0, 0.0]);
        // sigma^2(theta) = 1 + 0.5*2 = 2 = eps^2
        let b = arch_batch(vec![2f64.sqrt()], vec![2f64.sqrt()]);
        let g = m.gradient(&b, &[1.0, 0.5]).unwrap();
        assert!(g[0].abs() < 1e-15 && g[1].abs() < 1e-15);
    }

    #[test]
    fn variance_floor_is_an_error() {
        let m = ArchQml::new(false, None);
        let b = arch_batch(vec![1.0], vec![1.0]);
        let err = m.gradient(&b, &[-2.0, 1.0]).unwrap_err();
        assert!(matches!(err, ModelError::VarianceFloor { .. }));
    }

    #[test]
    fn qml_gradient_matches_finite_difference() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let m = ArchQml::new(false, None);
        for _ in 0..100 {
            let (b, _) = random_scalar_batch(&mut rng, 16, true);
            let theta = [
                0.5 + rand::Rng::random_range(&mut rng, 0.0..1.5),
                rand::Rng::random_range(&mut rng, 0.0..0.9),
            ];
            let lags = b.lagged_innovation.clone().unwrap();
            let loss = |t0: f64, t1: f64| -> f64 {
                (0..b.len())
                    .map(|i| {
                        let s2 = t0 + t1 * lags[i] * lags[i];
                        0.5 * (b.value(i) * b.value(i) / s2 + s2.ln())
                    })
                    .sum::<f64>()
                    / b.len() as f64
            };
            let g = m.gradient(&b, &theta).unwrap();
            let fd0 = finite_difference(&|x| loss(x, theta[1]), theta[0]);
            let fd1 = finite_difference(&|x| loss(theta[0], x), theta[1]);
            for (gi, fdi) in [(g[0], fd0), (g[1], fd1)] {
                let rel = (gi - fdi).abs() / gi.abs().max(fdi.abs()).max(1e-12);
                assert!(rel <= 1e-6, "rel err {rel}");
            }
        }
    }

    #[test]
    fn freeze_alpha0_zeroes_first_coordinate() {
        let m = ArchQml::new(true, None);
        let b = arch_batch(vec![3.0, -1.0], vec![0.5, 1.5]);
        let g = m.gradient(&b, &[1.0, 0.2]).unwrap();
        assert_eq!(g[0], 0.0);
        assert!(g[1] != 0.0);
    }

    #[test]
    fn joint_zero_noise_degenerate_batch_gives_zero_vector() {
        // Two symmetric observations engineered so both the AR residual score
        // and the QML score vanish at the truth.
        let th = 0.5;
        let (a0, a1) = (1.0, 0.5);
        let resid_lag = 1.0; // e_{s-1}(theta) = lag - th*lag2 = 2 - 0.5*2 = 1
        let sigma2 = a0 + a1 * resid_lag * resid_lag; // 1.5
        let e = sigma2.sqrt();
        let lag = 2.0;
        let lag2 = 2.0;
        let b = StreamBatch {
            index: 1,
            dim: 1,
            values: vec![th * lag + e, th * lag - e],
            lagged: vec![lag, lag],
            lagged2: Some(vec![lag2, lag2]),
            lagged_innovation: None,
        };
        let m = ArArchJoint::new(false, None);
        let g = m.gradient(&b, &[th, a0, a1]).unwrap();
        for gi in g {
            assert!(gi.abs() < 1e-14, "expected zero vector, got {gi}");
        }
    }

    #[test]
    fn joint_first_coordinate_is_pure_ar_gradient() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let (mut b, th) = random_scalar_batch(&mut rng, 8, false);
        b.lagged2 = Some(vec![0.1; 8]);
        let joint = ArArchJoint::new(false, None);
        let ar = crate::models::Ar1LeastSquares::new(None, 1.0);
        let g = joint.gradient(&b, &[th, 1.0, 0.0]).unwrap();
        let g_ar = ar.gradient(&b, &[th]).unwrap();
        assert!((g[0] - g_ar[0]).abs() < 1e-14);
    }

    /// The joint gradient is the concatenation of two estimating equations:
    /// the AR coordinate differentiates the squared loss only, and the ARCH
    /// coordinates differentiate the QML loss with the residual context held
    /// at the current theta. The oracle mirrors that split.
    #[test]
    fn joint_gradient_matches_finite_difference() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let m = ArArchJoint::new(false, None);
        for _ in 0..100 {
            let (mut b, th) = random_scalar_batch(&mut rng, 16, false);
            let lag2: Vec<f64> = (0..16)
                .map(|_| rand::Rng::random_range(&mut rng, -1.5..1.5))
                .collect();
            b.lagged2 = Some(lag2.clone());
            let theta = [th, 1.0 + rand::Rng::random_range(&mut rng, 0.0..1.0),
                rand::Rng::random_range(&mut rng, 0.0..0.8)];
            let ar_loss = |t: f64| -> f64 {
                (0..b.len())
                    .map(|i| {
                        let r = b.value(i) - t * b.lag(i);
                        r * r
                    })
                    .sum::<f64>()
                    / b.len() as f64
            };
            // Residual context frozen at the current theta.
            let resid: Vec<f64> = (0..b.len()).map(|i| b.value(i) - theta[0] * b.lag(i)).collect();
            let resid_lag: Vec<f64> =
                (0..b.len()).map(|i| b.lag(i) - theta[0] * lag2[i]).collect();
            let qml_loss = |a0: f64, a1: f64| -> f64 {
                (0..b.len())
                    .map(|i| {
                        let s2 = a0 + a1 * resid_lag[i] * resid_lag[i];
                        0.5 * (resid[i] * resid[i] / s2 + s2.ln())
                    })
                    .sum::<f64>()
                    / b.len() as f64
            };
            let g = m.gradient(&b, &theta).unwrap();
            let fds = [
                finite_difference(&ar_loss, theta[0]),
                finite_difference(&|x| qml_loss(x, theta[2]), theta[1]),
                finite_difference(&|x| qml_loss(theta[1], x), theta[2]),
            ];
            for k in 0..3 {
                let rel = (g[k] - fds[k]).abs() / g[k].abs().max(fds[k].abs()).max(1e-12);
                assert!(rel <= 1e-6, "coord {k} rel err {rel}");
            }
        }
    }
}
