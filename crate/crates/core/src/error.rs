use thiserror::Error;

use crate::lure::Trajectory;
use crate::RealVec;

pub type Result<T, E = LureError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum LureError {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("matrix is not positive definite (smallest eigenvalue of symmetric part {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("operator is not monotone: {0}")]
    NotMonotone(String),

    #[error("point lies outside the operator domain (distance {distance:e})")]
    OutsideDomain { distance: f64 },

    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged {
        what: &'static str,
        iterations: usize,
        residual: f64,
        best: RealVec,
    },

    #[error("step size {gamma} violates gamma * L < 1 (L = {lipschitz})")]
    StepTooLarge { gamma: f64, lipschitz: f64 },

    #[error("singular linear system in {0}")]
    Singular(&'static str),

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("simulation aborted at step {step}: {reason}")]
    SimulationAborted {
        step: usize,
        reason: String,
        partial: Box<Trajectory>,
    },
}

impl LureError {
    pub(crate) fn dim(context: &'static str, expected: usize, found: usize) -> Self {
        LureError::DimensionMismatch {
            context,
            expected,
            found,
        }
    }
}

pub(crate) fn ensure_dim(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(LureError::dim(context, expected, found))
    }
}

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(LureError::NonPositive { name, value })
    }
}
