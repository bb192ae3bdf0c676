use thiserror::Error;

use crate::intlin::IntVector;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vector {0} is not primitive")]
    NonPrimitiveVector(IntVector),
    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("polytope has dimension {dim} in ambient dimension {ambient}; re-embed it in its affine hull first")]
    LowerDimensional { dim: usize, ambient: usize },
    #[error("empty point set or tuple")]
    EmptyTuple,
    #[error("tuple length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("prism directions are linearly dependent")]
    ParallelDirections,
    #[error("too few polytopes for a mixed degree: {count} polytopes in dimension {dim}")]
    TooFewPolytopes { count: usize, dim: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("invalid seed polytope {name}: {reason}")]
    SeedInvalid { name: String, reason: String },
    #[error("missing dependency: {0}")]
    DependencyMissing(String),
    #[error("{count} classes are not covered by any maximal triple")]
    CoverageGap { count: usize, classes: Vec<String> },
    #[error("{count} counterexample tuples found")]
    CounterexampleFound { count: usize },
    #[error("corrupt cache entry: {0}")]
    CacheCorrupt(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
