use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at column {col}: {msg}")]
    Parse { col: usize, msg: String },
    #[error("{0}")]
    Format(String),
    #[error("incomplete data: missing entry {0}")]
    Incomplete(String),
    #[error("inadmissible index tuple {0}")]
    Inadmissible(String),
    #[error("unknown label '{0}'")]
    UnknownLabel(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("degenerate normalization: {0}")]
    Degenerate(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("not a fusion-compatible S: rounding residual {0:.3e}")]
    NotFusionCompatible(f64),
    #[error("power iteration did not converge: {0}")]
    NoConvergence(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
