//! Crate-wide error type.

/// Errors reported by design construction, linear algebra and verification.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("design is not symmetric: {0}")]
    SymmetryViolation(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("infeasible depth triple ({r1},{r2},{r3}) for k={k}: masses ({masses})")]
    InfeasibleTriple {
        k: usize,
        r1: usize,
        r2: usize,
        r3: usize,
        masses: String,
    },

    #[error("eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
