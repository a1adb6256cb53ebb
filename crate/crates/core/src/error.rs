use std::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside its admissible range.
    InvalidParameter(String),
    /// An iterative method failed to reach its tolerance.
    NoConvergence(String),
    /// The computation finished but the data do not support a verdict.
    Inconclusive(String),
    /// A root was sought but the function has no sign change on the
    /// search interval; callers use this as a meaningful outcome.
    NoRoot(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::NoConvergence(msg) => write!(f, "no convergence: {msg}"),
            Error::Inconclusive(msg) => write!(f, "inconclusive: {msg}"),
            Error::NoRoot(msg) => write!(f, "no root: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
