use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} positions, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("position {position} is out of range for n = {n}")]
    PositionOutOfRange { position: usize, n: usize },

    #[error("{n} input positions exceeds the maximum of {max}")]
    TooManyVariables { n: usize, max: usize },

    #[error("invalid hex truth table: {0}")]
    InvalidHex(String),

    #[error("invalid input word: {0}")]
    InvalidWord(String),

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("not a certificate of the function: {0}")]
    NotACertificate(String),

    #[error("function is constant")]
    ConstantFunction,

    #[error("function is 1 on the all-0 input; shift coordinates first")]
    ZeroInputIsOne,

    #[error("every restriction of the free positions is identically 1")]
    NoNonConstantSubfunction,

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("hypothesis violation: {0}")]
    Hypothesis(String),

    #[error("no function meets the constraints")]
    NoSolution,

    #[error("internal check failed: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
