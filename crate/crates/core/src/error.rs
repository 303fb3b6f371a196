use num_bigint::BigInt;
use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero argument: {0}")]
    ZeroArgument(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{0} is not an odd prime")]
    NotOddPrime(BigInt),
    #[error("base mismatch: {0}")]
    BaseMismatch(String),
    #[error("form is not regular")]
    NotRegular,
    #[error("degenerate diagonal entry at position {0}")]
    DegenerateEntry(usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("trial division bound {bound} exceeded while factoring {value}")]
    FactorBound { value: BigInt, bound: u64 },
    #[error("search exhausted: {what} (bound {bound})")]
    SearchExhausted { what: String, bound: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("algebra is not central")]
    NonCentral,
    #[error("closure violation: {0}")]
    ClosureViolation(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("unknown suite: {0}")]
    UnknownSuite(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Verification(_) => 1,
            Error::FactorBound { .. } | Error::SearchExhausted { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
