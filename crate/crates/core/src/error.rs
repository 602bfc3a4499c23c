use thiserror::Error;

/// Errors produced by the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group parameters: {0}")]
    BadParams(String),

    #[error("level error: {0}")]
    Level(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("sub-lattice is not contained in the super-lattice")]
    NotIncluded,

    #[error("negative coefficient {0} where a G-set cardinality is required")]
    NegativeCoefficient(String),

    #[error("section enumeration too large: {size} sections exceeds cap {cap}")]
    TooLarge { size: String, cap: u64 },

    #[error("rank exceeded: level {level} is already the top of the chain (r = {r})")]
    RankExceeded { level: usize, r: usize },

    #[error("out of range: {0}")]
    Range(String),

    #[error("malformed ideal sequence: {0}")]
    MalformedSequence(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("bad prime set: {0}")]
    BadPrimeSet(String),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
