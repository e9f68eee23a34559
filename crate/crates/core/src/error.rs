use thiserror::Error;

/// Errors produced while building or evaluating operators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left_rows}x{left_cols} and {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix side {side} exceeds the size limit of {limit}")]
    SizeLimit { side: usize, limit: usize },

    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("qudit dimension must be at least 2, got {0}")]
    InvalidDimension(usize),

    #[error("index {index} out of range for dimension {d}")]
    IndexOutOfRange { index: usize, d: usize },

    #[error("unknown gate `{name}` for d = {d}")]
    UnknownGate { name: String, d: usize },

    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid placement: {0}")]
    InvalidPlacement(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("probability {value} lies outside [0, 1]")]
    ProbabilityOutOfRange { value: f64 },

    #[error("probability has imaginary part {imag:.3e}")]
    ComplexProbability { imag: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
