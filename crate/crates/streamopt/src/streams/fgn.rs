//! Fractional Gaussian noise via the Hosking recursion.
//!
//! The sampler is the exact Cholesky factorization of the Toeplitz
//! autocovariance, computed incrementally (Levinson-Durbin) so that memory
//! stays O(L) and a length-2^14 path costs O(L^2) time instead of a dense
//! O(L^3) factorization. Circulant embedding would be a faster option for
//! long paths but is not needed at desk scale.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::StreamError;

/// fGn autocovariance `r(k) = (|k+1|^2H - 2|k|^2H + |k-1|^2H) / 2`; `r(0) = 1`.
pub fn fgn_autocovariance(hurst: f64, k: u64) -> f64 {
    let h2 = 2.0 * hurst;
    let k = k as f64;
    0.5 * ((k + 1.0).powf(h2) - 2.0 * k.powf(h2) + (k - 1.0).abs().powf(h2))
}

/// Zero-mean unit-variance fGn increments `G_s(H) = B_{s+1}(H) - B_s(H)`.
pub fn fgn_increments(
    hurst: f64,
    length: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>, StreamError> {
    if !(hurst > 0.0 && hurst < 1.0) {
        return Err(StreamError::InvalidSpec(format!(
            "hurst index must lie in (0,1), got {hurst}"
        )));
    }
    let z: Vec<f64> = (0..length).map(|_| rng.sample(StandardNormal)).collect();
    fgn_from_innovations(hurst, &z)
}

/// Deterministic linear map from i.i.d. standard normals to an fGn path.
///
/// Exposed for the exactness oracle in tests: feeding basis vectors recovers
/// the Cholesky factor of the Toeplitz covariance column by column.
pub fn fgn_from_innovations(hurst: f64, z: &[f64]) -> Result<Vec<f64>, StreamError> {
    let len = z.len();
    if len == 0 {
        return Ok(Vec::new());
    }
    // H = 1/2 is ordinary Brownian increments: r(k) = 0 for k >= 1.
    if (hurst - 0.5).abs() < 1e-15 {
        return Ok(z.to_vec());
    }
    let r: Vec<f64> = (0..len as u64).map(|k| fgn_autocovariance(hurst, k)).collect();

    let mut out = Vec::with_capacity(len);
    out.push(z[0]); // marginal variance r(0) = 1

    // phi[j] multiplies out[k-1-j] in the one-step conditional mean.
    let mut phi: Vec<f64> = Vec::with_capacity(len);
    let mut v = 1.0f64; // conditional (innovation) variance
    for k in 1..len {
        let mut num = r[k];
        for j in 0..k - 1 {
            num -= phi[j] * r[k - 1 - j];
        }
        let reflection = num / v;
        // phi_{k,j} = phi_{k-1,j} - reflection * phi_{k-1,k-j}
        let prev = phi.clone();
        for j in 0..k - 1 {
            phi[j] = prev[j] - reflection * prev[k - 2 - j];
        }
        phi.push(reflection);
        v *= 1.0 - reflection * reflection;
        if !(v > 0.0) || !v.is_finite() {
            return Err(StreamError::NotPositiveDefinite { lag: k });
        }
        let mut mean = 0.0;
        for j in 0..k {
            mean += phi[j] * out[k - 1 - j];
        }
        out.push(mean + v.sqrt() * z[k]);
    }
    Ok(out)
}
