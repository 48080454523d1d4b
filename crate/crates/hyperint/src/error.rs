use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A caller-supplied modulus or base is not prime (or is too large to certify).
    #[error("{0} is not a prime below 2^64")]
    NotPrime(u64),

    /// The argument is not a p-adic integer.
    #[error("{value} is not a {prime}-adic integer")]
    NotPadicInteger { value: String, prime: u64 },

    /// A parameter is out of range (non-coprime residue, zero modulus, ...).
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// The input is well formed but the operation is undefined on it.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series operation needs a specific constant term.
    #[error("series precondition: {0}")]
    Series(String),

    /// Text input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
