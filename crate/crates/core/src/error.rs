use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("evaluation at a pole: {0}")]
    Pole(String),
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("result overflows f64: {0}")]
    Overflow(String),
    #[error("outer radius {outer} must exceed inner radius {inner}")]
    Ordering { outer: f64, inner: f64 },
    #[error("primary exponent {found} does not match map exponent {expected}")]
    ExponentMismatch { expected: f64, found: f64 },
    #[error("no eigenvalue bracketed: {0}")]
    NoBracket(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
