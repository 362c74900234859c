use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("input vectors are linearly dependent")]
    DependentInput,

    #[error("empty input")]
    EmptyInput,

    #[error("zero covector")]
    ZeroCovector,

    #[error("expected {expected} polytopes, found {found}")]
    CountMismatch { expected: usize, found: usize },

    #[error("form is not a multiple of the frame covolume: {0}")]
    NotDecomposable(String),

    #[error("grading mismatch: {0}")]
    GradingMismatch(String),

    #[error("point {0} is not covered by the fan")]
    Uncovered(String),

    #[error("conewise polynomial is discontinuous: {0}")]
    ContinuityViolation(String),

    #[error("no generic displacement found after {attempts} attempts: {diagnostic}")]
    GenericityFailure { attempts: usize, diagnostic: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),
}
