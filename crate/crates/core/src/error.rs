use thiserror::Error;

/// Errors raised by construction, verification and I/O routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0} is not an odd prime")]
    NotOddPrime(String),

    #[error("prime {p} is below the required minimum {p_min}; a zero symbol would be possible")]
    PrimeTooSmall { p: String, p_min: String },

    #[error("seed X = {x} does not fit in {h} bits")]
    SeedOutOfRange { x: String, h: u32 },

    #[error("enumeration of {needed} items exceeds the budget of {budget}; {hint}")]
    BudgetExceeded {
        needed: u128,
        budget: u128,
        hint: &'static str,
    },

    #[error("weight window violated by codeword {codeword}: weight {weight} outside [{lo}, {hi}]")]
    WeightWindow {
        codeword: String,
        weight: u64,
        lo: String,
        hi: String,
    },

    #[error("Gram submatrix on support {partial_support:?} is numerically singular (condition estimate {condition:e})")]
    SingularSupport {
        partial_support: Vec<usize>,
        condition: f64,
    },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
