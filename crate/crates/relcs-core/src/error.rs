//! Error types shared across the numeric modules.

use core::fmt;

/// Failure modes of the numeric routines.
#[derive(Clone, Debug, PartialEq)]
pub enum CoreError {
    /// An argument violated a stated precondition.
    Domain { what: &'static str },
    /// Adaptive quadrature exhausted its subdivision budget before
    /// reaching the requested tolerance; the best value and its error
    /// estimate are carried along.
    QuadratureNonConvergence {
        value: f64,
        error_estimate: f64,
        evaluations: u64,
    },
    /// The integrand produced a NaN or infinity at an evaluation node.
    NonFiniteIntegrand { x: f64 },
    /// A series or iterative scheme failed to converge; carries the
    /// achieved residual.
    Convergence { residual: f64 },
    /// A sampling grid is too coarse for the requested tolerance; carries
    /// the estimated discretization error.
    GridResolution { estimate: f64 },
    /// An invalid configuration value.
    InvalidConfig { what: &'static str },
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::Domain { what } => write!(f, "domain error: {what}"),
            CoreError::QuadratureNonConvergence {
                value,
                error_estimate,
                evaluations,
            } => write!(
                f,
                "quadrature did not converge (best value {value:e}, estimate {error_estimate:e}, {evaluations} evaluations)"
            ),
            CoreError::NonFiniteIntegrand { x } => {
                write!(f, "integrand is not finite at x = {x:e}")
            }
            CoreError::Convergence { residual } => {
                write!(f, "iteration did not converge (residual {residual:e})")
            }
            CoreError::GridResolution { estimate } => {
                write!(f, "grid too coarse (estimated discretization error {estimate:e})")
            }
            CoreError::InvalidConfig { what } => write!(f, "invalid configuration: {what}"),
        }
    }
}

impl core::error::Error for CoreError {}

pub type Result<T> = core::result::Result<T, CoreError>;
