use thiserror::Error;

/// Which side of a product failed a closure or unit check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Left => f.write_str("left"),
            Side::Right => f.write_str("right"),
        }
    }
}

/// Basis indices carried by the variants are 0-based; messages print them
/// 1-based (`e1` is the first basis element).
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("algebra must have positive dimension")]
    EmptyAlgebra,

    #[error(
        "associativity fails: (e{a}e{b})e{c} != e{a}(e{b}e{c})",
        a = .i + 1, b = .j + 1, c = .k + 1
    )]
    Associativity { i: usize, j: usize, k: usize },

    #[error("unit law fails on the {side}: 1*e{n} != e{n}", n = .index + 1)]
    UnitLaw { index: usize, side: Side },

    #[error("vectors are linearly dependent")]
    LinearlyDependent,

    #[error(
        "subspace is not a two-sided ideal: {side} product of ideal vector {vector} with e{n} leaves the span",
        n = .basis + 1
    )]
    NotAnIdeal {
        vector: usize,
        basis: usize,
        side: Side,
    },

    #[error("relation is not reflexive: ({i}, {i}) missing", i = .i + 1)]
    Reflexivity { i: usize },

    #[error(
        "relation is not transitive: ({a}, {b}) and ({b}, {c}) present but ({a}, {c}) missing",
        a = .i + 1, b = .j + 1, c = .k + 1
    )]
    Transitivity { i: usize, j: usize, k: usize },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("family does not solve target equation {target}: {reason}")]
    FamilyMismatch { target: usize, reason: String },

    #[error("no Frobenius number: {0}")]
    NoFrobenius(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("{what}: genericity retry budget of {attempts} seeds exhausted")]
    RetryExhausted { what: &'static str, attempts: usize },

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of floating-point stages (eigensolver, genericity
    /// retries, rounding guards) as opposed to malformed input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Numeric(_) | Error::RetryExhausted { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
