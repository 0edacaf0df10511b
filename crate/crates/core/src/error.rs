use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("not ordinary: {0}")]
    NotOrdinary(String),
    #[error("non-unit constant term")]
    NonUnit,
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("missing eigenvalue for prime {0}")]
    MissingPrime(u64),
    #[error("unsupported bad prime {0}")]
    UnsupportedBadPrime(u64),
    #[error("prime {0} outside packet cutoff")]
    OutOfRange(u64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("insufficient cutoff: tail bound {tail:e} exceeds tolerance {tol:e}")]
    InsufficientCutoff { tail: f64, tol: f64 },
    #[error("branch mismatch: element on branch {elem}, weight on branch {weight}")]
    BranchMismatch { elem: u64, weight: u64 },
    #[error("evaluation at a pole")]
    Pole,
    #[error("unsupported input: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
