use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, LabError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(LabError::Domain(msg.into()))
}

pub(crate) fn pole<T>(msg: impl Into<String>) -> Result<T> {
    Err(LabError::Pole(msg.into()))
}
