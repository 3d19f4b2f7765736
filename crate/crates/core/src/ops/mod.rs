//! Finite-dimensional operator algebra: the monotone-operator catalog,
//! Lipschitz maps, and resolvents (plain, inverse, and with respect to a
//! positive definite linear map).

mod lipschitz;
mod operator;
mod wrt;

pub use lipschitz::{LipschitzMap, MapKind, SampleCheck, ScalarNonlinearity, StackBlock};
pub use operator::{MonotoneOperator, OperatorKind};
pub use wrt::{resolvent_wrt, PositiveDefiniteMap};

/// Tolerance and iteration budget for inner loops.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerBudget {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for InnerBudget {
    fn default() -> Self {
        InnerBudget {
            tol: 1e-10,
            max_iter: 100_000,
        }
    }
}
