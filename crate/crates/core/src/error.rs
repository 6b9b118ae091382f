use thiserror::Error;

/// Errors raised by the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("linear system I - tL is singular within tolerance")]
    SingularSystem,
    #[error("singular linear part in member {0}")]
    SingularLinearPart(usize),
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("family is not a similarity family")]
    NotSimilarity,
    #[error("family is not bounded (no unique member with maximal scaling ratio)")]
    NotBounded,
    #[error("jsr depth must be at least 1")]
    DepthTooSmall,
    #[error("no word depth <= 12 gives contracting products")]
    NoContractiveDepth,
    #[error("occupied set escaped the trapping ball")]
    NotTrapping,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("empty input")]
    EmptyInput,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("cone inequality admits no grid point")]
    NoFeasibleCone,
    #[error("hull nesting violated at t = {t}: excess {excess}")]
    NestingViolation { t: f64, excess: f64 },
    #[error("region leaves the unit disk")]
    RegionOutsideDisk,
    #[error("schema error: {0}")]
    Schema(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
