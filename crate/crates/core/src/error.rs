use thiserror::Error;

use crate::dynamics::DiagnosticsRecord;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value encountered in {0}")]
    NonFinite(String),

    #[error("Hermitian symmetry violated: relative defect {defect:.3e} exceeds {tolerance:.1e}")]
    HermitianViolation { defect: f64, tolerance: f64 },

    #[error("vorticity mean must vanish, found |c_0| = {mean:.3e}")]
    NonzeroMean { mean: f64 },

    #[error("fields live on different grids ({left} vs {right})")]
    GridMismatch { left: usize, right: usize },

    /// Integration produced non-finite coefficients. Carries the last valid diagnostics.
    #[error("solution blew up at t = {time}")]
    BlowUp {
        time: f64,
        last: Option<Box<DiagnosticsRecord>>,
    },

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("snapshot error: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}
