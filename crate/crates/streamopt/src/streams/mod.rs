//! Synthetic time-dependent data streams and real CSV ingestion.
//!
//! Generators produce whole series up front together with the pre-sample
//! context that autoregressive losses need (the observation, and where
//! relevant the innovation, one step before the first batch). The [`Batcher`]
//! then slices a series into time-varying mini-batches with aligned lags.

mod batch;
mod deseason;
mod fgn;
mod generate;
mod ingest;

pub use batch::{Batcher, StreamBatch};
pub use deseason::deseasonalize;
pub use fgn::{fgn_autocovariance, fgn_from_innovations, fgn_increments};
pub use generate::{generate_innovations, generate_series, GeneratedSeries};
pub use ingest::{ingest_csv, ingest_csv_reader, write_series_csv, IngestResult};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StreamError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("fGn covariance factorization failed at lag {lag}")]
    NotPositiveDefinite { lag: usize },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("column `{0}` not found in header")]
    MissingColumn(String),
    #[error("no value columns selected")]
    EmptySelection,
    #[error("no usable rows ({dropped} dropped)")]
    NoUsableRows { dropped: usize },
}

/// Innovation family driving a generator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Innovation {
    /// i.i.d. N(0,1).
    Gaussian,
    /// i.i.d. Student-t scaled to unit variance; requires df > 4.
    StudentT { df: f64 },
    /// `eps_s = sqrt(|G_s(H)|) z_s` with fGn increments G and unit-variance
    /// Student-t z. The absolute value keeps eps real-valued while preserving
    /// the long-range-dependent magnitude envelope.
    FgnStudentT { hurst: f64, df: f64 },
}

impl Default for Innovation {
    fn default() -> Self {
        Innovation::Gaussian
    }
}

/// Data-generating process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorKind {
    /// Stationary AR(1): `X_s = theta* X_{s-1} + eps_s`.
    Ar1 { theta_star: f64 },
    /// MA(1): `X_s = eps_s + phi* eps_{s-1}`.
    Ma1 { phi_star: f64 },
    /// ARCH(1): `eps_s = sigma_s z_s`, `sigma_s^2 = alpha0 + alpha1 eps_{s-1}^2`.
    Arch1 { alpha0: f64, alpha1: f64 },
    /// AR(1) driven by ARCH(1) innovations.
    Ar1Arch1 { theta_star: f64, alpha0: f64, alpha1: f64 },
    /// i.i.d. N(center, I_d) vectors.
    GaussianIid {
        dimension: usize,
        #[serde(default)]
        center: Option<Vec<f64>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub kind: GeneratorKind,
    #[serde(default)]
    pub innovation: Innovation,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, innovation: Innovation, seed: u64) -> Self {
        GeneratorSpec { kind, innovation, seed }
    }

    pub fn validate(&self) -> Result<(), StreamError> {
        match &self.kind {
            GeneratorKind::Ar1 { theta_star } => {
                if theta_star.abs() >= 1.0 {
                    return Err(StreamError::InvalidSpec(format!(
                        "ar1 requires |theta_star| < 1, got {theta_star}"
                    )));
                }
            }
            GeneratorKind::Ma1 { phi_star } => {
                if !phi_star.is_finite() {
                    return Err(StreamError::InvalidSpec("ma1 phi_star must be finite".into()));
                }
            }
            GeneratorKind::Arch1 { alpha0, alpha1 } => {
                validate_arch(*alpha0, *alpha1)?;
            }
            GeneratorKind::Ar1Arch1 { theta_star, alpha0, alpha1 } => {
                if theta_star.abs() >= 1.0 {
                    return Err(StreamError::InvalidSpec(format!(
                        "ar1_arch1 requires |theta_star| < 1, got {theta_star}"
                    )));
                }
                validate_arch(*alpha0, *alpha1)?;
            }
            GeneratorKind::GaussianIid { dimension, center } => {
                if *dimension == 0 {
                    return Err(StreamError::InvalidSpec("dimension must be >= 1".into()));
                }
                if let Some(c) = center {
                    if c.len() != *dimension {
                        return Err(StreamError::InvalidSpec(format!(
                            "center has length {} but dimension is {dimension}",
                            c.len()
                        )));
                    }
                }
            }
        }
        self.innovation_validate()
    }

    fn innovation_validate(&self) -> Result<(), StreamError> {
        match self.innovation {
            Innovation::Gaussian => Ok(()),
            Innovation::StudentT { df } => {
                if df <= 4.0 {
                    Err(StreamError::InvalidSpec(format!(
                        "student_t requires degrees of freedom above four, got {df}"
                    )))
                } else {
                    Ok(())
                }
            }
            Innovation::FgnStudentT { hurst, df } => {
                if !(hurst > 0.0 && hurst < 1.0) {
                    Err(StreamError::InvalidSpec(format!(
                        "fgn_student_t requires hurst in (0,1), got {hurst}"
                    )))
                } else if df <= 4.0 {
                    Err(StreamError::InvalidSpec(format!(
                        "fgn_student_t requires degrees of freedom above four, got {df}"
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Dimension of one observation.
    pub fn dimension(&self) -> usize {
        match &self.kind {
            GeneratorKind::GaussianIid { dimension, .. } => *dimension,
            _ => 1,
        }
    }
}

fn validate_arch(alpha0: f64, alpha1: f64) -> Result<(), StreamError> {
    if !(alpha0 > 0.0) {
        return Err(StreamError::InvalidSpec(format!(
            "arch requires alpha0 > 0, got {alpha0}"
        )));
    }
    if !(alpha1 >= 0.0) {
        return Err(StreamError::InvalidSpec(format!(
            "arch requires alpha1 >= 0, got {alpha1}"
        )));
    }
    Ok(())
}
