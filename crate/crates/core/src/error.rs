use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A branch needs roots outside the single supported extension of ℚ.
    #[error("unsupported field extension: {0}")]
    UnsupportedFieldExtension(String),

    /// More than one simple extension would be needed at once.
    #[error("nested number-field extension is not supported: {0}")]
    NestedExtension(String),

    #[error("truncation too low: {0}")]
    RaiseTruncation(String),

    #[error("inverse of a non-unit series (order {0})")]
    NonUnit(usize),

    #[error("composition needs an inner series of order >= 1")]
    CompositionOrder,

    #[error("action matrices do not commute (coordinates {0} and {1})")]
    NonCommuting(usize, usize),

    #[error("matrix is not nilpotent: {0}")]
    NotNilpotent(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("polynomial does not vanish at the designated point")]
    NotOnCurve,

    #[error("curve is not reduced: {0}")]
    NotReduced(String),

    #[error("degenerate branch: {0}")]
    DegenerateBranch(String),

    #[error("implicit equation needs degree {found} > bound {bound}; raise the degree bound")]
    DegreeBoundExceeded { bound: usize, found: usize },

    #[error("rank {rank} is below the critical rank r0 = {r0}")]
    RankBelowCritical { rank: u64, r0: u64 },

    #[error("stabilization failed: {0}")]
    NoStabilization(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}
