use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the kinematics library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation
    /// (zero quaternion, non-unit pose, log at -1, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// Malformed or inconsistent input (bad knot times, length mismatch, ...).
    #[error("input error: {0}")]
    Input(String),
    /// A numerical failure during evaluation (non-finite values, a spline
    /// passing near the zero quaternion, ...).
    #[error("numeric error: {0}")]
    Numeric(String),
    /// An iterative solver ran out of iterations.
    #[error("no convergence after {} iterations (residual {:e})", .0.iterations, .0.residual)]
    Convergence(Box<ConvergenceFailure>),
}

/// Best state reached by a solver that failed to converge.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceFailure {
    pub iterations: usize,
    /// Best iterate found.
    pub best: Vec<f64>,
    /// Residual norm at `best`.
    pub residual: f64,
    /// Residual norm of each accepted iterate, starting with the initial guess.
    pub history: Vec<f64>,
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
