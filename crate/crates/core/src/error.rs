use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("gate must be homogeneous (N = M), got ({n}, {m})")]
    NotHomogeneous { n: usize, m: usize },

    #[error("not unitary: {0}")]
    NotUnitary(String),

    #[error("not dual unitary: {0}")]
    NotDualUnitary(String),

    #[error("not a permutation: {0}")]
    NotPermutation(String),

    #[error("malformed map: {0}")]
    Malformed(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("cap exceeded: {what} needs {needed}, cap is {cap}")]
    CapExceeded { what: String, needed: u128, cap: u128 },

    #[error("refusing n = {n}: {reason}")]
    TooLarge { n: usize, reason: String },

    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),

    #[error("eigensolver failed: {0}")]
    Eigen(String),

    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
