use thiserror::Error;

use crate::kernel::Value;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("map is not total: {0}")]
    NotTotal(String),
    #[error("value {0} is not in the codomain")]
    OutOfCodomain(Value),
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("map is not surjective: {0} has no preimage")]
    NotSurjective(Value),
    #[error("adjunction cell {kind} used at an object over the wrong base")]
    KindError { kind: &'static str },
    #[error("square is not a pullback: component fails to be bijective at {witness}")]
    NotAPullback { witness: Value },
    #[error("malformed element {0}: {1}")]
    Malformed(Value, &'static str),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("verification failed: {equation} at {witness}")]
    VerificationFailed { equation: String, witness: Value },
    #[error("not a fibration: {0}")]
    NotAFibration(String),
    #[error("invalid retract: {0}")]
    InvalidRetract(String),
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unresolved name: {0}")]
    Resolution(String),
    #[error("instance invariant violated: {0}")]
    Invariant(String),
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
}

impl Error {
    pub(crate) fn mismatch(msg: impl Into<String>) -> Self {
        Error::BoundaryMismatch(msg.into())
    }
}
