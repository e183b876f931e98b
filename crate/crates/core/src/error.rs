use thiserror::Error;

/// Errors surfaced by the calculus engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("no grid point lies in the function domain")]
    EmptyDomain,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("grid of {points} points exceeds the cap of {cap}")]
    GridTooLarge { points: u128, cap: u128 },
    #[error("brute-force search refused in {dim} dimensions (limit {limit})")]
    DimensionGuard { dim: usize, limit: usize },
    #[error("set is not compact")]
    NonCompact,
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("qualification condition {0} is not verified; waive it to obtain an upper bound")]
    QualificationNotVerified(String),
    #[error("linear program failed: {0}")]
    Lp(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
