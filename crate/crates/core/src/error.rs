use thiserror::Error;

/// Errors surfaced by the library. The CLI maps these onto exit codes:
/// input problems → 2, precondition failures → 3, numeric non-convergence → 4.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("unsupported genus {0}; supported range is 1..=6")]
    UnsupportedGenus(i64),
    #[error("generic condition violated: {0}")]
    NotGeneric(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix not admissible: {0}")]
    NotPositiveDefinite(String),
    #[error("point not on the curve: {0}")]
    NotOnCurve(String),
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("characteristic must be half-integral and nonzero mod Z^g: {0}")]
    NonHalfIntegerBeta(String),
    #[error("quasi-periodicity broken: {0}")]
    QuasiPeriodicityBroken(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("A_t is empty: {0}")]
    EmptyASet(String),
    #[error("expected a positive value: {0}")]
    NonPositive(String),
    #[error("root ordering failed, eps too large: {0}")]
    RootOrderingFailed(String),
    #[error("quadrature did not converge: {0}")]
    QuadratureNotConverged(String),
    #[error("input error: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
