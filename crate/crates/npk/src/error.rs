//! Shared error type for the whole crate.
//!
//! Every fallible operation returns [`Error`]; the CLI maps variants onto
//! its documented process exit codes via [`Error::exit_code`].

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("matrix is singular")]
    Singular,

    #[error("field containment violated: Q(zeta_{src}) does not embed in Q(zeta_{dst})")]
    FieldContainment { src: u64, dst: u64 },

    #[error("entries do not lie in Q(zeta_{order})")]
    FieldViolation { order: u64 },

    #[error("matrix is not a {n}-potent")]
    NotNPotent { n: u32 },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid n-partition: {0}")]
    InvalidPartition(String),

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("witness verification failed: {0}")]
    VerificationFailed(String),

    #[error("unrealizable rank pattern: {0}")]
    UnrealizableRanks(String),

    #[error("orbit is not a singleton: omega_{k} lies outside the base field")]
    FoldedOrbit { k: usize },

    #[error("class signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("invalid class target: {0}")]
    InvalidClassTarget(String),

    #[error("invalid n-homomorphism: {0}")]
    InvalidNHom(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the CLI: 1 parse/input error, 2 not an
    /// n-potent, 3 field violation, 4 verification failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotNPotent { .. } => 2,
            Error::FieldContainment { .. } | Error::FieldViolation { .. } | Error::FoldedOrbit { .. } => 3,
            Error::VerificationFailed(_) | Error::InvalidWitness(_) => 4,
            _ => 1,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
