use thiserror::Error;

pub type Result<T> = std::result::Result<T, SpreadError>;

#[derive(Debug, Error)]
pub enum SpreadError {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: asymmetry {asymmetry:.3e} exceeds {allowed:.3e}")]
    NotHermitian { asymmetry: f64, allowed: f64 },

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid comparison: {0}")]
    InvalidComparison(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("columns are not orthonormal: deviation {deviation:.3e}")]
    NotIsometry { deviation: f64 },

    #[error("subspaces have a principal angle of pi/2 (cos = {min_cos:.3e}); direct rotation is degenerate")]
    DegeneratePair { min_cos: f64 },

    #[error("eigen solver did not converge (matrix digest {digest})")]
    NoConvergence { digest: String },

    #[error("unknown structured instance `{0}`")]
    UnknownInstance(String),

    #[error("unknown check `{0}`")]
    UnknownCheck(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
