use thiserror::Error;

/// Errors raised by the symbolic layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("q value {0} is outside the open interval (0, 1)")]
    QOutOfRange(String),
    #[error("context mismatch: left operand has n = {left}, right operand has n = {right}")]
    ContextMismatch { left: usize, right: usize },
    #[error("generator index {index} is out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("the number of generators must be at least 1")]
    EmptyContext,
}

/// Errors raised while building or evaluating truncated representations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReprError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("basis too large: {count} basis vectors exceed the limit of {limit}")]
    TooLarge { count: u128, limit: usize },
    #[error("truncation too small: bound {truncation} cannot certify words of length {word_length}")]
    TruncationTooSmall { truncation: usize, word_length: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("polynomial has n = {poly} but the representation has n = {rep}")]
    DimensionMismatch { poly: usize, rep: usize },
}

/// Errors raised by the norm computations and experiments.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error(transparent)]
    Repr(#[from] ReprError),
    #[error("norm iteration did not converge after {iterations} iterations (last estimate {last})")]
    NoConvergence { iterations: usize, last: f64 },
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("invalid tolerance {0}")]
    InvalidTolerance(f64),
    #[error("invalid matrix polynomial: {0}")]
    InvalidMatrix(String),
}

impl From<AlgebraError> for NumericsError {
    fn from(e: AlgebraError) -> Self {
        NumericsError::Repr(ReprError::Algebra(e))
    }
}
