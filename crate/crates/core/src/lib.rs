//! Equilibria of set-valued Lur'e systems
//!
//! ```text
//! 0 ∈ f(x) + B (F^{-1} + D)^{-1}(Cx)
//! ```
//!
//! together with the quasi-variational inequalities and Nash
//! quasi-equilibrium problems that lower to this form, and time-stepping
//! schemes for the underlying differential inclusion.
//!
//! The layers, bottom up:
//!
//! * [`ops`]: the closed catalog of maximal monotone operators with exact
//!   resolvents, Lipschitz maps, and resolvents with respect to a positive
//!   definite matrix.
//! * [`composite`]: resolvents and evaluations of `B = (F^{-1} + D)^{-1}`,
//!   `G = C^T B C` and, for passive systems, `H = g + G`.
//! * [`splitting`]: forward-backward-forward, proximal point and projected
//!   forward-backward iterations.
//! * [`lure`]: the system model, assumption checks, equilibrium solving and
//!   simulation.
//! * [`qvi`] and [`nash`]: front ends that assemble a [`lure::LureSystem`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod composite;
pub mod error;
pub mod linalg;
pub mod lure;
pub mod nash;
pub mod ops;
pub mod qvi;
pub mod splitting;

pub use error::{LureError, Result};
pub use linalg::{RealMat, RealVec};
pub use lure::{LureSystem, Scheme, Trajectory};
pub use ops::{InnerBudget, LipschitzMap, MonotoneOperator};
pub use splitting::{SolverConfig, SolverReport, SolverStatus};
