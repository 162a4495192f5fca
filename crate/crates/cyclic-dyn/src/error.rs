/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("sample set contains duplicate ticks")]
    DuplicatePoints,
    #[error("sample set must contain at least one point")]
    EmptySample,
    #[error("invalid scale: {0}")]
    InvalidScale(String),
    #[error("operation requires a rational scale p/q")]
    NotRational,
    #[error("cone family {0} requires the parameter q")]
    MissingQ(String),
    #[error("point has dimension {got}, cone has dimension {want}")]
    DimensionMismatch { want: usize, got: usize },
    #[error("cone too large for exact integration ({half} gap pairs, limit {limit})")]
    TooLarge { half: usize, limit: usize },
    #[error("scale must be below 1/2 for Vietoris-Rips analysis")]
    ScaleTooLarge,
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
