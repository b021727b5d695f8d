use thiserror::Error;

/// Errors raised by ring arithmetic, matrix algebra, and the oracles built on them.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("operands belong to distinct rings")]
    DistinctRings,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("index out of range: {0}")]
    Index(String),

    #[error("ring does not carry an involution")]
    NoInvolution,

    #[error("operation requires a finite ring")]
    InfiniteRing,

    #[error("form membership is undecidable here: {0}")]
    Undecidable(String),

    #[error("parameter violates the form condition: {0}")]
    LambdaViolation(String),

    #[error("inverse check failed: value and inverse do not multiply to the identity")]
    NotInverse,

    #[error("matrix is not unitary for this form ring")]
    NotUnitary,

    #[error("invalid ring or form specification: {0}")]
    Spec(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("element does not belong to this ring: {0}")]
    Foreign(String),

    #[error("closure table is incomplete (cap of {0} elements reached)")]
    Incomplete(usize),

    #[error("enumeration too large: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
