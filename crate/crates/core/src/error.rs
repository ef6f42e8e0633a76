use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity must be at least 1")]
    EmptyArity,
    #[error("position {position} out of range 1..={n}")]
    PositionOutOfRange { position: usize, n: usize },
    #[error("position {0} listed twice")]
    DuplicatePosition(usize),
    #[error("arity mismatch: expected {expected}, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("arity {n} exceeds the dense limit {limit}")]
    DenseLimitExceeded { n: usize, limit: usize },
    #[error("not a permutation of 1..={n}: {reason}")]
    NotAPermutation { n: usize, reason: String },
    #[error("a group needs at least one generator")]
    NoGenerators,
    #[error("group is not transitive")]
    Intransitive,
    #[error("orbit exceeds the cap of {cap} members")]
    OrbitCapExceeded { cap: usize },
    #[error("minterm support must be non-empty")]
    EmptySupport,
    #[error("{0}")]
    Parameter(String),
    #[error("search budget of {0} evaluations exceeded")]
    BudgetExceeded(u64),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
