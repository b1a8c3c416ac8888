//! Slicing a series into time-varying mini-batches with lagged context.

use crate::schedules::ScheduleParams;

use super::GeneratedSeries;

/// One mini-batch of observations plus the lagged context autoregressive
/// losses index: `lagged[i] = X_{N_{t-1}+i-1}` and, where the process defines
/// them, the second lag `X_{N_{t-1}+i-2}` and the previous true innovation
/// `eps_{N_{t-1}+i-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct StreamBatch {
    /// Batch index `t >= 1`.
    pub index: u64,
    /// Observation dimension.
    pub dim: usize,
    /// Row-major observations, `n_t * dim`.
    pub values: Vec<f64>,
    /// One-step-back observations aligned with `values`.
    pub lagged: Vec<f64>,
    /// Two-step-back observations (AR-ARCH residual context).
    pub lagged2: Option<Vec<f64>>,
    /// Previous true innovations (ARCH quasi-likelihood context).
    pub lagged_innovation: Option<Vec<f64>>,
}

impl StreamBatch {
    /// Number of observations `n_t` in the batch.
    pub fn len(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Scalar observation accessors used by the univariate losses.
    pub fn value(&self, i: usize) -> f64 {
        debug_assert_eq!(self.dim, 1);
        self.values[i]
    }

    pub fn lag(&self, i: usize) -> f64 {
        debug_assert_eq!(self.dim, 1);
        self.lagged[i]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }
}

/// Iterator of [`StreamBatch`] over a generated series following a schedule.
/// Ends cleanly after the last batch the series can fill completely.
pub struct Batcher<'a> {
    series: &'a GeneratedSeries,
    schedule: ScheduleParams,
    t: u64,
    consumed: usize,
}

impl<'a> Batcher<'a> {
    pub fn new(series: &'a GeneratedSeries, schedule: ScheduleParams) -> Self {
        Batcher { series, schedule, t: 0, consumed: 0 }
    }
}

impl Iterator for Batcher<'_> {
    type Item = StreamBatch;

    fn next(&mut self) -> Option<StreamBatch> {
        let t = self.t + 1;
        let n = self.schedule.batch_size(t) as usize;
        if self.consumed + n > self.series.len() {
            return None;
        }
        let dim = self.series.dim;
        let mut values = Vec::with_capacity(n * dim);
        let mut lagged = Vec::with_capacity(n * dim);
        let has_lag2 = self.series.pre_lag2.is_some();
        let has_innov = self.series.innovations.is_some();
        let mut lagged2 = has_lag2.then(|| Vec::with_capacity(n * dim));
        let mut lagged_innovation = has_innov.then(|| Vec::with_capacity(n));
        for i in 1..=n {
            let s = (self.consumed + i) as i64;
            values.extend_from_slice(self.series.row(s).expect("length checked"));
            lagged.extend_from_slice(self.series.row(s - 1).expect("lag context"));
            if let Some(l2) = lagged2.as_mut() {
                l2.extend_from_slice(self.series.row(s - 2).expect("lag2 context"));
            }
            if let Some(li) = lagged_innovation.as_mut() {
                li.push(self.series.innovation(s - 1).expect("innovation context"));
            }
        }
        self.consumed += n;
        self.t = t;
        Some(StreamBatch { index: t, dim, values, lagged, lagged2, lagged_innovation })
    }
}
