//! Series generators for the synthetic studies.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, StudentT};

use super::fgn::fgn_increments;
use super::{GeneratorKind, GeneratorSpec, Innovation, StreamError};

/// Burn-in used when no closed-form stationary law is available.
const BURN_IN: usize = 1000;

/// A fully materialized series plus the pre-sample context needed to form
/// lagged mini-batches.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedSeries {
    /// Observation dimension (1 for all scalar processes).
    pub dim: usize,
    /// Row-major observations `X_1 .. X_L`, length `L * dim`.
    pub values: Vec<f64>,
    /// Pre-sample observation `X_0` (one row).
    pub pre_lag: Vec<f64>,
    /// Second pre-sample `X_{-1}` where the process defines one (AR-ARCH).
    pub pre_lag2: Option<Vec<f64>>,
    /// True innovations `eps_1 .. eps_L` for ARCH-driven processes.
    pub innovations: Option<Vec<f64>>,
    /// Pre-sample innovation `eps_0`.
    pub pre_innovation: Option<f64>,
    /// Set when an explosive path overflowed; trailing values are NaN.
    pub diverged: bool,
}

impl GeneratedSeries {
    pub fn len(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Row at 1-based absolute index `s`; `s = 0` is the pre-sample,
    /// `s = -1` the second pre-sample.
    pub fn row(&self, s: i64) -> Option<&[f64]> {
        match s {
            -1 => self.pre_lag2.as_deref(),
            0 => Some(&self.pre_lag),
            s if s >= 1 && (s as usize) <= self.len() => {
                let i = (s as usize - 1) * self.dim;
                Some(&self.values[i..i + self.dim])
            }
            _ => None,
        }
    }

    /// Innovation at 1-based index `s`; `s = 0` is the pre-sample innovation.
    pub fn innovation(&self, s: i64) -> Option<f64> {
        match s {
            0 => self.pre_innovation,
            s if s >= 1 => self.innovations.as_ref().and_then(|v| v.get(s as usize - 1).copied()),
            _ => None,
        }
    }
}

/// Unit-variance innovation sequence for the configured family.
pub fn generate_innovations(
    spec: &GeneratorSpec,
    length: usize,
) -> Result<Vec<f64>, StreamError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    innovations_with_rng(&spec.innovation, length, &mut rng)
}

pub(crate) fn innovations_with_rng(
    innovation: &Innovation,
    length: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>, StreamError> {
    match *innovation {
        Innovation::Gaussian => Ok((0..length).map(|_| rng.sample(StandardNormal)).collect()),
        Innovation::StudentT { df } => {
            let t = StudentT::new(df)
                .map_err(|e| StreamError::InvalidSpec(format!("student_t: {e}")))?;
            // Raw t_df has variance df/(df-2); rescale to unit variance.
            let scale = ((df - 2.0) / df).sqrt();
            Ok((0..length).map(|_| scale * t.sample(rng)).collect())
        }
        Innovation::FgnStudentT { hurst, df } => {
            let g = fgn_increments(hurst, length, rng)?;
            let t = StudentT::new(df)
                .map_err(|e| StreamError::InvalidSpec(format!("student_t: {e}")))?;
            let scale = ((df - 2.0) / df).sqrt();
            Ok(g.iter().map(|gi| gi.abs().sqrt() * scale * t.sample(rng)).collect())
        }
    }
}

/// Generate `length` observations of the configured process.
pub fn generate_series(spec: &GeneratorSpec, length: usize) -> Result<GeneratedSeries, StreamError> {
    spec.validate()?;
    if length == 0 {
        return Err(StreamError::InvalidSpec("length must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match &spec.kind {
        GeneratorKind::Ar1 { theta_star } => generate_ar1(spec, *theta_star, length, &mut rng),
        GeneratorKind::Ma1 { phi_star } => generate_ma1(spec, *phi_star, length, &mut rng),
        GeneratorKind::Arch1 { alpha0, alpha1 } => {
            Ok(generate_arch1(*alpha0, *alpha1, length, &mut rng))
        }
        GeneratorKind::Ar1Arch1 { theta_star, alpha0, alpha1 } => {
            Ok(generate_ar1_arch1(*theta_star, *alpha0, *alpha1, length, &mut rng))
        }
        GeneratorKind::GaussianIid { dimension, center } => {
            Ok(generate_gaussian_iid(*dimension, center.as_deref(), length, &mut rng))
        }
    }
}

fn generate_ar1(
    spec: &GeneratorSpec,
    theta_star: f64,
    length: usize,
    rng: &mut ChaCha8Rng,
) -> Result<GeneratedSeries, StreamError> {
    let gaussian = matches!(spec.innovation, Innovation::Gaussian);
    if gaussian {
        // Exact stationary start: X_0 ~ N(0, 1/(1-theta*^2)) for unit-variance noise.
        let stat_sd = (1.0 / (1.0 - theta_star * theta_star)).sqrt();
        let x0: f64 = stat_sd * rng.sample::<f64, _>(StandardNormal);
        let eps = innovations_with_rng(&spec.innovation, length, rng)?;
        let mut values = Vec::with_capacity(length);
        let mut x = x0;
        for e in &eps {
            x = theta_star * x + e;
            values.push(x);
        }
        Ok(GeneratedSeries {
            dim: 1,
            values,
            pre_lag: vec![x0],
            pre_lag2: None,
            innovations: None,
            pre_innovation: None,
            diverged: false,
        })
    } else {
        // No closed-form stationary law for heavy-tailed / fGn noise: burn in.
        let eps = innovations_with_rng(&spec.innovation, BURN_IN + length, rng)?;
        let mut x = 0.0;
        for e in &eps[..BURN_IN] {
            x = theta_star * x + e;
        }
        let x0 = x;
        let mut values = Vec::with_capacity(length);
        for e in &eps[BURN_IN..] {
            x = theta_star * x + e;
            values.push(x);
        }
        Ok(GeneratedSeries {
            dim: 1,
            values,
            pre_lag: vec![x0],
            pre_lag2: None,
            innovations: None,
            pre_innovation: None,
            diverged: false,
        })
    }
}

fn generate_ma1(
    spec: &GeneratorSpec,
    phi_star: f64,
    length: usize,
    rng: &mut ChaCha8Rng,
) -> Result<GeneratedSeries, StreamError> {
    // eps_{-1}, eps_0, eps_1, ..., eps_L
    let eps = innovations_with_rng(&spec.innovation, length + 2, rng)?;
    let x0 = eps[1] + phi_star * eps[0];
    let values: Vec<f64> = (0..length).map(|s| eps[s + 2] + phi_star * eps[s + 1]).collect();
    Ok(GeneratedSeries {
        dim: 1,
        values,
        pre_lag: vec![x0],
        pre_lag2: None,
        innovations: None,
        pre_innovation: None,
        diverged: false,
    })
}

fn generate_arch1(
    alpha0: f64,
    alpha1: f64,
    length: usize,
    rng: &mut ChaCha8Rng,
) -> GeneratedSeries {
    let z: Vec<f64> = (0..=length).map(|_| rng.sample(StandardNormal)).collect();
    let eps0 = alpha0.sqrt() * z[0];
    let mut eps = Vec::with_capacity(length);
    let mut prev = eps0;
    let mut diverged = false;
    for zi in &z[1..] {
        let sigma2 = alpha0 + alpha1 * prev * prev;
        let e = sigma2.sqrt() * zi;
        if !e.is_finite() {
            diverged = true;
        }
        let e = if diverged { f64::NAN } else { e };
        eps.push(e);
        prev = e;
    }
    GeneratedSeries {
        dim: 1,
        values: eps.clone(),
        pre_lag: vec![eps0],
        pre_lag2: None,
        innovations: Some(eps),
        pre_innovation: Some(eps0),
        diverged,
    }
}

fn generate_ar1_arch1(
    theta_star: f64,
    alpha0: f64,
    alpha1: f64,
    length: usize,
    rng: &mut ChaCha8Rng,
) -> GeneratedSeries {
    // Burn in from X = 0; the last two burn-in values become X_{-1}, X_0 and
    // the last burn-in innovation becomes eps_0.
    let total = BURN_IN + length;
    let mut eps_prev = alpha0.sqrt() * rng.sample::<f64, _>(StandardNormal);
    let mut x_prev = 0.0;
    let mut diverged = false;
    let mut values = Vec::with_capacity(length);
    let mut innovations = Vec::with_capacity(length);
    let mut pre_innovation = eps_prev;
    let mut pre_lag = 0.0;
    let mut pre_lag2 = 0.0;
    for s in 1..=total {
        let zi: f64 = rng.sample(StandardNormal);
        let sigma2 = alpha0 + alpha1 * eps_prev * eps_prev;
        let e = sigma2.sqrt() * zi;
        let x = theta_star * x_prev + e;
        if !x.is_finite() {
            diverged = true;
        }
        let (e, x) = if diverged { (f64::NAN, f64::NAN) } else { (e, x) };
        if s == BURN_IN {
            pre_lag = x;
            pre_lag2 = x_prev;
            pre_innovation = e;
        }
        if s > BURN_IN {
            values.push(x);
            innovations.push(e);
        }
        eps_prev = e;
        x_prev = x;
    }
    GeneratedSeries {
        dim: 1,
        values,
        pre_lag: vec![pre_lag],
        pre_lag2: Some(vec![pre_lag2]),
        innovations: Some(innovations),
        pre_innovation: Some(pre_innovation),
        diverged,
    }
}

fn generate_gaussian_iid(
    dimension: usize,
    center: Option<&[f64]>,
    length: usize,
    rng: &mut ChaCha8Rng,
) -> GeneratedSeries {
    let center: Vec<f64> = center.map(|c| c.to_vec()).unwrap_or_else(|| vec![0.0; dimension]);
    let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        center.iter().map(|c| c + rng.sample::<f64, _>(StandardNormal)).collect()
    };
    let pre_lag = draw(rng);
    let mut values = Vec::with_capacity(length * dimension);
    for _ in 0..length {
        values.extend(draw(rng));
    }
    GeneratedSeries {
        dim: dimension,
        values,
        pre_lag,
        pre_lag2: None,
        innovations: None,
        pre_innovation: None,
        diverged: false,
    }
}
