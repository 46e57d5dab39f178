//! Crate-wide error type.
//!
//! Every fallible operation returns [`Result`]. Variants distinguish the
//! failure classes callers are expected to branch on: mathematical domain
//! violations, results not representable in `f64`, iterative kernels that
//! ran out of iterations, inversions outside the invertible branch, data
//! with no usable information, and fits that exhausted their damping
//! schedule (those keep the best parameters found so far).

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure classes for the numerical and statistical operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Result overflows or underflows the range of `f64`.
    #[error("not representable in f64: {0}")]
    Overflow(String),

    /// An iterative kernel did not reach its tolerance.
    #[error("no convergence after {iterations} iterations (error estimate {achieved:.3e})")]
    NoConvergence { iterations: usize, achieved: f64 },

    /// Requested value lies outside the invertible branch of a function.
    #[error("out of range: {0}")]
    OutOfRange(String),

    /// Input data carry no information for the requested operation.
    #[error("degenerate data: {0}")]
    DegenerateData(String),

    /// The fitter exhausted its damping cycles without meeting the
    /// convergence tests; `best` holds the parameters at the lowest
    /// objective seen.
    #[error(
        "fit did not converge after {cycles} damping cycles \
         (best objective {best_objective:.6e})"
    )]
    FitNotConverged {
        cycles: usize,
        best: [f64; 3],
        best_objective: f64,
    },
}
