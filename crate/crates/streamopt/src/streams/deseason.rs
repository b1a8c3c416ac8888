//! Seasonal adjustment for calendar-indexed series.

use chrono::{Datelike, NaiveDateTime};

/// Remove annual then monthly seasonality, per column: subtract each
/// calendar-year group mean, then subtract each calendar-month (across years)
/// group mean of the year-centered residuals. The order is fixed; month-group
/// means of the output are exactly zero up to rounding.
pub fn deseasonalize(data: &[f64], dim: usize, timestamps: &[NaiveDateTime]) -> Vec<f64> {
    assert_eq!(data.len(), dim * timestamps.len(), "matrix/timestamp shape mismatch");
    let rows = timestamps.len();
    let mut out = data.to_vec();

    subtract_group_means(&mut out, dim, rows, |i| timestamps[i].year() as i64);
    subtract_group_means(&mut out, dim, rows, |i| timestamps[i].month() as i64);
    out
}

fn subtract_group_means(
    data: &mut [f64],
    dim: usize,
    rows: usize,
    group_of: impl Fn(usize) -> i64,
) {
    use std::collections::HashMap;
    let mut sums: HashMap<i64, (Vec<f64>, usize)> = HashMap::new();
    for i in 0..rows {
        let entry = sums.entry(group_of(i)).or_insert_with(|| (vec![0.0; dim], 0));
        for j in 0..dim {
            entry.0[j] += data[i * dim + j];
        }
        entry.1 += 1;
    }
    for i in 0..rows {
        let (sum, count) = &sums[&group_of(i)];
        for j in 0..dim {
            data[i * dim + j] -= sum[j] / *count as f64;
        }
    }
}
