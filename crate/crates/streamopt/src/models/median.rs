//! Geometric median: streaming gradient and the Weiszfeld batch reference.

use crate::streams::StreamBatch;

use super::{check_dim, LossModel, ModelError};

/// Streaming geometric-median loss `F(theta) = E[|X - theta| - |X|]`.
///
/// The descent gradient of `|X - theta|` is `(theta - X)/|theta - X|`; a
/// zero-distance observation contributes the zero vector (a valid
/// subgradient element).
#[derive(Debug, Clone)]
pub struct GeometricMedian {
    pub dimension: usize,
    /// Reference optimum (for example a Weiszfeld solution), when known.
    pub target: Option<Vec<f64>>,
}

impl GeometricMedian {
    pub fn new(dimension: usize) -> Self {
        GeometricMedian { dimension, target: None }
    }

    pub fn with_target(dimension: usize, target: Vec<f64>) -> Self {
        GeometricMedian { dimension, target: Some(target) }
    }
}

impl LossModel for GeometricMedian {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn gradient(&self, batch: &StreamBatch, theta: &[f64]) -> Result<Vec<f64>, ModelError> {
        check_dim(self.dimension, theta)?;
        Ok(geometric_median_gradient(&batch.values, self.dimension, theta))
    }

    fn optimum(&self) -> Option<Vec<f64>> {
        self.target.clone()
    }
}

/// `(1/n) sum_i (theta - X_i)/|theta - X_i|`, zero-distance terms contributing
/// zero. The result always has norm at most 1.
pub fn geometric_median_gradient(points: &[f64], dim: usize, theta: &[f64]) -> Vec<f64> {
    let n = points.len() / dim;
    let mut g = vec![0.0; dim];
    for i in 0..n {
        let row = &points[i * dim..(i + 1) * dim];
        let mut dist2 = 0.0;
        for j in 0..dim {
            let d = theta[j] - row[j];
            dist2 += d * d;
        }
        if dist2 > 0.0 {
            let dist = dist2.sqrt();
            for j in 0..dim {
                g[j] += (theta[j] - row[j]) / dist;
            }
        }
    }
    for gj in &mut g {
        *gj /= n as f64;
    }
    g
}

#[derive(Debug, Clone)]
pub struct WeiszfeldResult {
    pub median: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

/// Weiszfeld fixed-point iteration `theta <- (sum X_i/d_i) / (sum 1/d_i)`.
///
/// Stops when the step norm falls below `tol`. If an iterate lands exactly on
/// a data point, that point is returned when the subgradient condition
/// certifies it as the median; otherwise the iterate is nudged by `tol` along
/// the steepest-descent direction and the iteration continues.
pub fn weiszfeld(points: &[f64], dim: usize, tol: f64, max_iter: usize) -> WeiszfeldResult {
    assert!(max_iter >= 1, "max_iter must be >= 1");
    assert!(points.len() % dim == 0 && !points.is_empty(), "points must be n*dim");
    let n = points.len() / dim;
    // start from the centroid
    let mut theta = vec![0.0; dim];
    for i in 0..n {
        for j in 0..dim {
            theta[j] += points[i * dim + j];
        }
    }
    for t in &mut theta {
        *t /= n as f64;
    }

    for iter in 1..=max_iter {
        let mut num = vec![0.0; dim];
        let mut den = 0.0;
        let mut anchored: Option<usize> = None;
        let mut anchored_count = 0usize;
        for i in 0..n {
            let row = &points[i * dim..(i + 1) * dim];
            let mut dist2 = 0.0;
            for j in 0..dim {
                let d = theta[j] - row[j];
                dist2 += d * d;
            }
            if dist2 == 0.0 {
                anchored = Some(i);
                anchored_count += 1;
                continue;
            }
            let inv = 1.0 / dist2.sqrt();
            for j in 0..dim {
                num[j] += row[j] * inv;
            }
            den += inv;
        }
        if let Some(_i) = anchored {
            if den == 0.0 {
                // every point coincides with the iterate
                return WeiszfeldResult { median: theta, converged: true, iterations: iter };
            }
            // Subgradient check at a data point: the point is the median iff
            // the norm of the summed unit vectors from the other points is at
            // most the multiplicity of the anchor.
            let mut resultant = vec![0.0; dim];
            for j in 0..dim {
                resultant[j] = den * theta[j] - num[j];
            }
            let norm = resultant.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm <= anchored_count as f64 {
                return WeiszfeldResult { median: theta, converged: true, iterations: iter };
            }
            // Nudge off the data point along the steepest-descent direction.
            for j in 0..dim {
                theta[j] -= tol * resultant[j] / norm;
            }
            continue;
        }
        let mut step2 = 0.0;
        for j in 0..dim {
            let next = num[j] / den;
            let d = next - theta[j];
            step2 += d * d;
            theta[j] = next;
        }
        if step2.sqrt() < tol {
            return WeiszfeldResult { median: theta, converged: true, iterations: iter };
        }
    }
    WeiszfeldResult { median: theta, converged: false, iterations: max_iter }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::tests_support::finite_difference;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn gradient_points_away_from_observation() {
        let g = geometric_median_gradient(&[1.0, 0.0], 2, &[0.0, 0.0]);
        assert!((g[0] + 1.0).abs() < 1e-15);
        assert!(g[1].abs() < 1e-15);
    }

    #[test]
    fn zero_distance_contributes_zero() {
        let g = geometric_median_gradient(&[0.5, -0.25], 2, &[0.5, -0.25]);
        assert_eq!(g, vec![0.0, 0.0]);
    }

    #[test]
    fn gradient_matches_finite_difference_away_from_points() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let dim = 3;
        for _ in 0..100 {
            let points: Vec<f64> = (0..8 * dim).map(|_| rng.random_range(-2.0..2.0)).collect();
            let theta: Vec<f64> = (0..dim).map(|_| rng.random_range(2.5..4.0)).collect();
            let loss = |th: &[f64]| -> f64 {
                (0..8)
                    .map(|i| {
                        let row = &points[i * dim..(i + 1) * dim];
                        row.iter()
                            .zip(th)
                            .map(|(x, t)| (x - t) * (x - t))
                            .sum::<f64>()
                            .sqrt()
                    })
                    .sum::<f64>()
                    / 8.0
            };
            let g = geometric_median_gradient(&points, dim, &theta);
            for k in 0..dim {
                let f = |x: f64| {
                    let mut p = theta.clone();
                    p[k] = x;
                    loss(&p)
                };
                let fd = finite_difference(&f, theta[k]);
                let rel = (g[k] - fd).abs() / g[k].abs().max(fd.abs()).max(1e-12);
                assert!(rel <= 1e-6, "rel err {rel}");
            }
        }
    }

    #[test]
    fn weiszfeld_symmetric_cross() {
        let pts = [1.0, 0.0, -1.0, 0.0, 0.0, 1.0, 0.0, -1.0];
        let r = weiszfeld(&pts, 2, 1e-12, 1000);
        assert!(r.converged);
        assert!(r.median[0].abs() < 1e-9 && r.median[1].abs() < 1e-9);
    }

    #[test]
    fn weiszfeld_single_point() {
        let r = weiszfeld(&[3.0, -2.0], 2, 1e-10, 10);
        assert!(r.converged);
        assert_eq!(r.median, vec![3.0, -2.0]);
    }

    #[test]
    fn weiszfeld_matches_grid_search() {
        // Dense grid-search oracle over [0,1]^2 at resolution 1e-3.
        let pts = [0.0, 0.0, 1.0, 0.0, 0.0, 1.0];
        let total_dist = |x: f64, y: f64| -> f64 {
            (0..3)
                .map(|i| {
                    let (px, py) = (pts[2 * i], pts[2 * i + 1]);
                    ((x - px).powi(2) + (y - py).powi(2)).sqrt()
                })
                .sum()
        };
        let mut best = (f64::INFINITY, 0.0, 0.0);
        let res = 1000;
        for ix in 0..=res {
            for iy in 0..=res {
                let (x, y) = (ix as f64 / res as f64, iy as f64 / res as f64);
                let d = total_dist(x, y);
                if d < best.0 {
                    best = (d, x, y);
                }
            }
        }
        let r = weiszfeld(&pts, 2, 1e-10, 10_000);
        assert!(r.converged);
        assert!((r.median[0] - best.1).abs() < 2e-3, "{} vs {}", r.median[0], best.1);
        assert!((r.median[1] - best.2).abs() < 2e-3, "{} vs {}", r.median[1], best.2);
    }

    #[test]
    fn weiszfeld_anchored_median_returns_data_point() {
        // Center of a star with 4 arms: centroid equals the data point and
        // the subgradient check certifies it.
        let pts = [0.0, 0.0, 2.0, 0.0, -2.0, 0.0, 0.0, 2.0, 0.0, -2.0];
        let r = weiszfeld(&pts, 2, 1e-12, 100);
        assert!(r.converged);
        assert!(r.median[0].abs() < 1e-9 && r.median[1].abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn gradient_norm_at_most_one(seed in 0u64..300) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let dim = 4;
            let points: Vec<f64> = (0..6*dim).map(|_| rng.random_range(-3.0..3.0)).collect();
            let theta: Vec<f64> = (0..dim).map(|_| rng.random_range(-3.0..3.0)).collect();
            let g = geometric_median_gradient(&points, dim, &theta);
            let norm = g.iter().map(|v| v*v).sum::<f64>().sqrt();
            prop_assert!(norm <= 1.0 + 1e-12);
        }

        #[test]
        fn weiszfeld_translation_and_permutation_equivariance(
            seed in 0u64..200,
            cx in -5.0f64..5.0,
            cy in -5.0f64..5.0,
        ) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = 7;
            let mut pts: Vec<f64> = (0..n*2).map(|_| rng.random_range(-2.0..2.0)).collect();
            let base = weiszfeld(&pts, 2, 1e-11, 5000);
            // translation
            let shifted: Vec<f64> = pts.chunks(2).flat_map(|p| [p[0]+cx, p[1]+cy]).collect();
            let moved = weiszfeld(&shifted, 2, 1e-11, 5000);
            prop_assert!((moved.median[0] - base.median[0] - cx).abs() < 1e-6);
            prop_assert!((moved.median[1] - base.median[1] - cy).abs() < 1e-6);
            // permutation
            pts.rotate_left(2 * 3);
            let perm = weiszfeld(&pts, 2, 1e-11, 5000);
            prop_assert!((perm.median[0] - base.median[0]).abs() < 1e-6);
            prop_assert!((perm.median[1] - base.median[1]).abs() < 1e-6);
        }
    }
}
