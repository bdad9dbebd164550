use thiserror::Error;

/// Errors raised anywhere in the engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("degree of the zero polynomial is undefined")]
    ZeroPolynomial,
    #[error("expansion has a pole of order {0} at infinity")]
    PoleAtInfinity(i64),
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("usage error: {0}")]
    Usage(String),
    #[error("invalid fixed-point label: {0}")]
    InvalidLabel(String),
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),
    #[error("stable envelope is not unique: solution space of dimension {dimension}")]
    NonUnique { dimension: usize },
    #[error("stable envelope axioms have no solution: {0}")]
    NoSolution(String),
    #[error("slope {slope} lies on a wall where stable envelopes jump")]
    WallSlope { slope: String },
    #[error("chambers are not adjacent: {0}")]
    AdjacentRequired(String),
    #[error("root {0} is outside the supported range")]
    RootOutOfRange(i64),
    #[error("scalar term of quantum multiplication is not determined: {0}")]
    ScalarUnderdetermined(String),
    #[error("truncation degree {truncation} too small for degree block {requested}")]
    TruncationExceeded { truncation: usize, requested: usize },
    #[error("path is not generic and cannot be resolved")]
    NonGenericUnresolvable,
    #[error("invalid arrangement: {0}")]
    InvalidArrangement(String),
    #[error("invalid chamber: {0}")]
    InvalidChamber(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
