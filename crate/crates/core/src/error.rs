use thiserror::Error;

/// Which of the base-code commutation conditions failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Commutator {
    /// `[A, B] != 0`
    AB,
    /// `[A, Aᵀ] != 0`
    AAt,
    /// `[B, Bᵀ] != 0`
    BBt,
    /// `[U, Uᵀ] != 0` for the stacked block `U`
    UUt,
}

impl std::fmt::Display for Commutator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Commutator::AB => "[A,B]",
            Commutator::AAt => "[A,A^T]",
            Commutator::BBt => "[B,B^T]",
            Commutator::UUt => "[U,U^T]",
        })
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("reflection terms are not supported here: {0}")]
    ReflectionUnsupported(&'static str),

    #[error("commutator {0} does not vanish")]
    CommutatorViolation(Commutator),

    #[error("invalid code spec field `{field}`: {reason}")]
    InvalidSpec { field: String, reason: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("budget exhausted: distance lies in [{lower}, {}]", upper.map_or("?".to_string(), |u| u.to_string()))]
    BudgetExhausted { lower: usize, upper: Option<usize> },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
