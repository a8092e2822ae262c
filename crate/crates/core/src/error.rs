//! Error type shared across the crate.

use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A vector's length does not match the dimension of its space.
    DimensionMismatch { expected: usize, got: usize },
    /// A numeric argument is outside the operation's admissible range.
    InvalidArgument(String),
    /// A domain-type invariant (e.g. `u <= v` or `|x| <= m`) is violated.
    InvariantViolation(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::InvariantViolation(msg) => write!(f, "invariant violation: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn invalid(msg: &str) -> Error {
    Error::InvalidArgument(String::from(msg))
}

pub(crate) fn violation(msg: &str) -> Error {
    Error::InvariantViolation(String::from(msg))
}
