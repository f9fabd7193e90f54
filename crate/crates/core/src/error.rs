//! Error type shared across the toolkit.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A scenario parameter violates its documented constraint.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Failed to parse a JSON configuration document.
    #[error("configuration parse error: {0}")]
    ConfigParse(String),

    /// Matrix or vector dimensions do not line up.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A linear solve hit a singular or badly conditioned matrix.
    #[error("singular matrix: {0}")]
    Singular(String),

    /// The requested SINR targets are not simultaneously achievable.
    #[error("infeasible SINR targets: spectral radius of the coupling system is {radius:.6}")]
    InfeasibleTargets { radius: f64 },

    /// A channel geometry makes the duality system degenerate.
    #[error("infeasible geometry: {0}")]
    InfeasibleGeometry(String),

    /// An input is outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An exact covariance computation was requested above the supported size.
    #[error("matrix of size {size} exceeds the exact-covariance limit of {limit}")]
    TooLarge { size: usize, limit: usize },

    /// A search grid contained no feasible operating point.
    #[error("empty feasible grid: {0}")]
    EmptyGrid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
