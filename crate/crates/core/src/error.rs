use crate::space::MetricViolation;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("malformed distance matrix: {0}")]
    MalformedMatrix(String),

    #[error("metric axioms violated ({} violation(s)), first: {}", .0.len(), .0[0])]
    InvalidMetric(Vec<MetricViolation>),

    #[error("malformed point cloud: {0}")]
    MalformedCloud(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{what}: expected size {expected}, got {got}")]
    SizeMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("relation must contain at least one pair")]
    EmptyRelation,

    #[error("composition is empty: no middle element links the two relations")]
    EmptyComposition,

    #[error("index {index} out of range for side of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("not a correspondence: {0}")]
    NotACorrespondence(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("exhaustive enumeration is limited to {limit} points per side (got {got}); use the branch-and-bound solver instead")]
    SizeLimit { limit: usize, got: usize },

    #[error("unsupported dimension {dim} for {context}")]
    UnsupportedDimension { dim: usize, context: &'static str },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
