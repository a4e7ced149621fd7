use thiserror::Error;

/// Error taxonomy shared by all subsystems.
///
/// The CLI maps these onto process exit codes, so variants are kept coarse:
/// configuration problems, non-regular maps, degenerate oracles, and
/// numerical/resource failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("unsupported scalar domain: {0}")]
    UnsupportedDomain(String),

    #[error("non-regular map: {0}")]
    NonRegular(String),

    #[error("degenerate oracle: {0}")]
    DegenerateOracle(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("memory budget exceeded: {0}")]
    MemoryBudget(String),
}

pub type Result<T> = std::result::Result<T, Error>;
