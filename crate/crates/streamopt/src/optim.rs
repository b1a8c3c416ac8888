//! Streaming gradient estimators: the SSG update, optional Euclidean
//! projection (PSSG), and the online Polyak-Ruppert average (ASSG/APSSG).
//!
//! One step consumes one mini-batch:
//!
//! ```text
//! theta_t   = P( theta_{t-1} - gamma_t * mean_i grad f_{t,i}(theta_{t-1}) )
//! thetabar_t = (N_{t-1}/N_t) thetabar_{t-1} + (n_t/N_t) theta_{t-1}
//! ```
//!
//! The average always uses the pre-update (stored, hence projected) iterate,
//! with `thetabar_0 = 0`, so after t steps it equals the batch-size-weighted
//! mean of `theta_0 .. theta_{t-1}`.

use serde::{Deserialize, Serialize};

use crate::models::LossModel;
use crate::schedules::ScheduleParams;
use crate::streams::StreamBatch;

/// Iterates with any non-finite component or norm beyond this are flagged as
/// diverged; the state freezes so replication sweeps can keep running.
pub const DIVERGENCE_NORM: f64 = 1e12;

/// Closed convex sets supported by the projection step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProjectionSpec {
    None,
    Ball { center: Vec<f64>, radius: f64 },
    Box { lower: Vec<f64>, upper: Vec<f64> },
}

impl ProjectionSpec {
    pub fn validate(&self, dim: usize) -> Result<(), String> {
        match self {
            ProjectionSpec::None => Ok(()),
            ProjectionSpec::Ball { center, radius } => {
                if center.len() != dim {
                    return Err(format!("ball center has length {}, expected {dim}", center.len()));
                }
                if !(*radius > 0.0) {
                    return Err(format!("ball radius must be positive, got {radius}"));
                }
                Ok(())
            }
            ProjectionSpec::Box { lower, upper } => {
                if lower.len() != dim || upper.len() != dim {
                    return Err("box bounds must match the model dimension".into());
                }
                if lower.iter().zip(upper).any(|(l, u)| l > u) {
                    return Err("box lower bound exceeds upper bound".into());
                }
                Ok(())
            }
        }
    }
}

/// Euclidean projection onto the set; identity for `None`. Idempotent and
/// nonexpansive.
pub fn project(theta: &mut [f64], spec: &ProjectionSpec) {
    match spec {
        ProjectionSpec::None => {}
        ProjectionSpec::Ball { center, radius } => {
            let mut dist2 = 0.0;
            for (t, c) in theta.iter().zip(center) {
                dist2 += (t - c) * (t - c);
            }
            let dist = dist2.sqrt();
            if dist > *radius {
                let scale = radius / dist;
                for (t, c) in theta.iter_mut().zip(center) {
                    *t = c + (*t - c) * scale;
                }
            }
        }
        ProjectionSpec::Box { lower, upper } => {
            for ((t, l), u) in theta.iter_mut().zip(lower).zip(upper) {
                *t = t.clamp(*l, *u);
            }
        }
    }
}

/// Current iterate, running average, and observation accounting.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerState {
    /// Batches consumed.
    pub t: u64,
    /// Last iterate `theta_t`.
    pub theta: Vec<f64>,
    /// Polyak-Ruppert average `thetabar_t` (zero vector before any step).
    pub theta_bar: Vec<f64>,
    /// Observations consumed, `N_t`.
    pub n_cum: u64,
    /// Set on gradient failure or a non-finite/huge iterate; frozen once set.
    pub diverged: bool,
}

impl OptimizerState {
    pub fn new(theta0: Vec<f64>) -> Self {
        let dim = theta0.len();
        OptimizerState { t: 0, theta: theta0, theta_bar: vec![0.0; dim], n_cum: 0, diverged: false }
    }
}

/// Advance the state by one mini-batch. No-op once diverged.
pub fn ssg_step(
    state: &mut OptimizerState,
    batch: &StreamBatch,
    model: &dyn LossModel,
    schedule: &ScheduleParams,
    projection: &ProjectionSpec,
) {
    if state.diverged {
        return;
    }
    let t = state.t + 1;
    debug_assert_eq!(batch.index, t, "batch fed out of order");
    debug_assert_eq!(batch.len() as u64, schedule.batch_size(t), "batch size off schedule");
    let n = batch.len() as u64;
    let gamma = schedule.learning_rate(t, n);

    let grad = match model.gradient(batch, &state.theta) {
        Ok(g) => g,
        Err(_) => {
            state.diverged = true;
            return;
        }
    };

    // average first (uses the pre-update iterate), then update, then project
    let n_new = state.n_cum + n;
    let w_old = state.n_cum as f64 / n_new as f64;
    let w_new = n as f64 / n_new as f64;
    for (bar, prev) in state.theta_bar.iter_mut().zip(&state.theta) {
        *bar = w_old * *bar + w_new * *prev;
    }

    for (th, g) in state.theta.iter_mut().zip(&grad) {
        *th -= gamma * g;
    }
    project(&mut state.theta, projection);

    state.t = t;
    state.n_cum = n_new;

    let norm2: f64 = state.theta.iter().map(|v| v * v).sum();
    if !norm2.is_finite() || norm2 > DIVERGENCE_NORM * DIVERGENCE_NORM {
        state.diverged = true;
    }
}

/// State recorded when the cumulative count first reaches a snapshot target.
#[derive(Debug, Clone)]
pub struct Snapshot {
    /// The grid value this snapshot answers for.
    pub target_n: u64,
    pub t: u64,
    pub n_cum: u64,
    pub theta: Vec<f64>,
    pub theta_bar: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub snapshots: Vec<Snapshot>,
    pub final_state: OptimizerState,
}

/// Drive the optimizer over a batch stream for at most `horizon_t` batches,
/// recording the state the first time `N_t` reaches each target (targets must
/// be ascending). Deterministic given the batch stream.
pub fn run(
    model: &dyn LossModel,
    batches: impl Iterator<Item = StreamBatch>,
    schedule: &ScheduleParams,
    projection: &ProjectionSpec,
    horizon_t: u64,
    theta0: Vec<f64>,
    snapshot_targets: &[u64],
) -> Trajectory {
    assert!(horizon_t >= 1, "horizon must be >= 1");
    let mut state = OptimizerState::new(theta0);
    let mut snapshots = Vec::with_capacity(snapshot_targets.len());
    let mut next_target = 0usize;
    for batch in batches.take(horizon_t as usize) {
        ssg_step(&mut state, &batch, model, schedule, projection);
        while next_target < snapshot_targets.len() && state.n_cum >= snapshot_targets[next_target] {
            snapshots.push(Snapshot {
                target_n: snapshot_targets[next_target],
                t: state.t,
                n_cum: state.n_cum,
                theta: state.theta.clone(),
                theta_bar: state.theta_bar.clone(),
            });
            next_target += 1;
        }
        if state.diverged {
            break;
        }
    }
    Trajectory { snapshots, final_state: state }
}

/// ~`count` log-spaced integer targets in `[lo, hi]`, deduplicated, always
/// ending at `hi`.
pub fn log_grid(lo: u64, hi: u64, count: usize) -> Vec<u64> {
    assert!(lo >= 1 && hi >= lo && count >= 1);
    let (llo, lhi) = ((lo as f64).ln(), (hi as f64).ln());
    let mut out: Vec<u64> = (0..count)
        .map(|i| {
            let f = i as f64 / (count - 1).max(1) as f64;
            (llo + f * (lhi - llo)).exp().round() as u64
        })
        .collect();
    out.push(hi);
    out.sort_unstable();
    out.dedup();
    out
}
