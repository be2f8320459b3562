use std::path::PathBuf;

use thiserror::Error;

use crate::baselines::MethodId;

/// Errors produced while building or running a scheme.
#[derive(Debug, Error)]
pub enum Error {
    #[error("singular matrix: pivot magnitude {pivot:e} in column {column}")]
    SingularMatrix { column: usize, pivot: f64 },

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("scheme parameters are singular: {0}")]
    ParamSingularity(String),

    #[error("implicit step matrix I - phi*theta*A is singular")]
    SingularImplicitStep,

    #[error("transfer matrix deviates from exp(Ah) by {deviation:e} (bound {bound:e})")]
    ExactnessViolation { deviation: f64, bound: f64 },

    #[error("step matrix of {method} is singular")]
    SingularStepMatrix { method: MethodId },

    #[error("T/h = {ratio} is not a positive integer (T = {t_end}, h = {h})")]
    GridMismatch { t_end: f64, h: f64, ratio: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
