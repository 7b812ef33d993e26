use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = CasimirError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CasimirError {
    #[error("domain error: {0}")]
    Domain(String),

    /// A quadrature or series did not reach the requested tolerance. The best
    /// estimate is attached so callers can decide whether to use it.
    #[error("tolerance not met in {context}: estimate {estimate:e}, error {error:e}")]
    ToleranceNotMet {
        context: &'static str,
        estimate: f64,
        error: f64,
    },

    #[error("out of scope: {0}")]
    Scope(String),

    #[error("frequency {xi:e} rad/s outside the trusted range [{min:e}, {max:e}] of tabulated data")]
    Range { xi: f64, min: f64, max: f64 },

    #[error("{}: row {row}: {reason}", path.display())]
    Load { path: PathBuf, row: usize, reason: String },

    #[error("io error on {}: {reason}", path.display())]
    Io { path: PathBuf, reason: String },

    #[error("unknown material '{0}'")]
    UnknownMaterial(String),

    #[error("material '{0}' already registered")]
    DuplicateMaterial(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl CasimirError {
    pub fn domain(msg: impl Into<String>) -> Self {
        CasimirError::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, err: impl std::fmt::Display) -> Self {
        CasimirError::Io {
            path: path.into(),
            reason: err.to_string(),
        }
    }

    /// Whether the error is a numerical degradation rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, CasimirError::ToleranceNotMet { .. })
    }
}
