//! Crate-wide error type.

use crate::network::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The network specification violates one or more invariants.
    #[error("invalid network spec:\n{0}")]
    InvalidSpec(ValidationReport),

    /// Structured input could not be parsed.
    #[error("parse error at {locus}: {message}")]
    Parse { locus: String, message: String },

    /// A field length disagrees with the declared `M`/`N`.
    #[error("dimension mismatch for `{field}`: expected {expected}, got {got}")]
    DimensionMismatch {
        field: String,
        expected: String,
        got: String,
    },

    /// Dense eigensolver failed to converge or produced residuals above contract.
    #[error("eigensolver failure: {0}")]
    EigensolverFailure(String),

    /// An operation's stated precondition does not hold.
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    /// Hybridization requires every coupling in the group to be nonzero;
    /// zero columns are dark outright and must be stripped first.
    #[error("zero coupling at type-b normal mode {index} in hybridization group")]
    ZeroCouplingInGroup { index: usize },

    /// The drift matrix has an eigenvalue with non-negative real part.
    #[error("unstable system: max Re(eigenvalue) = {max_real_eig:e}")]
    UnstableSystem { max_real_eig: f64 },

    /// The Lyapunov system is numerically singular (marginal stability).
    #[error("singular Lyapunov system: {0}")]
    SingularKroneckerSystem(String),

    /// Fixed-point iteration ran out of iterations.
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    /// Enumeration guard: the requested size is beyond the combinatorial cap.
    #[error("N = {n} too large for enumeration (max {max})")]
    TooLarge { n: usize, max: usize },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
