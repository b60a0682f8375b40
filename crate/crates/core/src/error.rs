use thiserror::Error;

/// Errors produced by kronlab computations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("resource bound exceeded: {what} (limit {limit})")]
    BoundExceeded { what: String, limit: u64 },

    /// A quantity that must be integral (or idempotent, or symmetric) was not.
    /// Always indicates a bug upstream, never a rounding issue.
    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("zero state: {0}")]
    ZeroState(String),

    #[error("empty witness space: {0}")]
    EmptySpace(String),

    #[error("unsupported pipeline shape: {0}")]
    UnsupportedPipeline(String),

    #[error("cache error: {0}")]
    Cache(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn bound(what: impl Into<String>, limit: u64) -> Self {
        Error::BoundExceeded { what: what.into(), limit }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
