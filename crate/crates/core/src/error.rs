use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("size mismatch in {what}: expected {expected}, found {found}")]
    SizeMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid multiset: {0}")]
    InvalidMultiset(String),

    #[error("invalid dimension vector: {0}")]
    InvalidDimensions(String),

    #[error("label {label} out of range: only {available} inputs supplied")]
    LabelOutOfRange { label: usize, available: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular")]
    Singular,

    #[error("random generation exhausted {0} retries")]
    RetriesExhausted(usize),

    #[error("{what} has size {size}, above the limit of {limit}; {advice}")]
    GuardExceeded {
        what: &'static str,
        size: u128,
        limit: u128,
        advice: &'static str,
    },

    #[error("bound not available: {0}")]
    BoundUnavailable(String),

    #[error("contraction plan does not match the monomial or dimensions")]
    PlanMismatch,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
