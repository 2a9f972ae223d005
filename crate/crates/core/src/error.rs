use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Precondition violations are reported as `InvalidInput`; `Inconsistent`
/// signals an internal identity that failed to hold (a bug, never a user error).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("gcd({a}, {n}) = {g}, expected 1")]
    NotCoprime { a: u64, n: u64, g: u64 },
    #[error("even field order {0} is not supported here")]
    EvenOrder(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial must be monic")]
    NotMonic,
    #[error("polynomial has zero constant term")]
    ZeroConstantTerm,
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
