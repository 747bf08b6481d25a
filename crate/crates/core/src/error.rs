use thiserror::Error;

/// Errors produced by the exact algebra and solver routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("parse error: {0}")]
    Parse(String),

    /// An input violates a mathematical precondition (for example f(P) != 0).
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A candidate matrix does not solve the equation it was checked against.
    #[error("not a solution: {0}")]
    NotASolution(String),

    #[error("enumeration would produce {count} candidates, cap is {cap}")]
    CapExceeded { count: u128, cap: u128 },

    #[error("infeasible Jordan profile: n={n}, k={k}, t={t}")]
    InfeasibleProfile { n: u64, k: u64, t: u64 },
}

impl Error {
    /// True for errors caused by malformed input rather than failed mathematics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch(_)
                | Error::NotSquare { .. }
                | Error::Parse(_)
                | Error::CapExceeded { .. }
                | Error::InfeasibleProfile { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
