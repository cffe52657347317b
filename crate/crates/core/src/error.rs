// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by the spectral and transport routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("transfer product overflowed; last finite product at n = {last_valid}")]
    Overflow { last_valid: usize },

    #[error("model provides {available} coefficients, {requested} requested")]
    OutOfRange { requested: usize, available: usize },

    #[error("measure has {points} support points, cannot build {requested} orthonormal polynomials")]
    RankDeficient { points: usize, requested: usize },

    #[error("three-term recurrence broke down at index {index}: a^2 = {value:e}")]
    Breakdown { index: usize, value: f64 },

    #[error("energy {energy} outside tabulated range [{lo}, {hi}]")]
    TableRange { energy: f64, lo: f64, hi: f64 },

    #[error("lead kind `{0}` cannot be truncated to a finite chain")]
    UnsupportedLead(String),

    #[error("inconsistent data at E = {energy}: {what}")]
    Inconsistent { energy: f64, what: String },

    #[error("invalid configuration at {pointer}: {message}")]
    Config { pointer: String, message: String },

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            pointer: pointer.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by user input rather than numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::Config { .. }
                | Error::OutOfRange { .. }
                | Error::RankDeficient { .. }
                | Error::TableRange { .. }
                | Error::UnsupportedLead(_)
                | Error::Json(_)
                | Error::Csv(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
