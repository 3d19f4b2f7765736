//! Set-valued Lur'e systems
//!
//! ```text
//! x'(t) = -f(x) + B lambda,   y = Cx + D lambda,   lambda ∈ -F(y)
//! ```
//!
//! Equilibria solve `0 ∈ f(x) + B (F^{-1} + D)^{-1}(Cx)`.

mod equilibrium;
mod simulate;
mod validate;

use std::fmt;
use std::str::FromStr;

use crate::composite::{ComposedOperatorB, ComposedOperatorG};
use crate::error::{ensure_dim, LureError, Result};
use crate::linalg::{self, RealMat, RealVec};
use crate::ops::{LipschitzMap, MonotoneOperator};

pub use equilibrium::{
    equilibrium, equilibrium_with, inclusion_residual, FeedbackResolvent, Route,
};
pub use simulate::{simulate, simulate_with};
pub use validate::{validate, Mode, ValidationReport};

/// The tuple `(f, B, C, D, F)` with an optional passivity certificate `P`.
#[derive(Debug, Clone)]
pub struct LureSystem {
    f: LipschitzMap,
    b: RealMat,
    c: RealMat,
    d: RealMat,
    op: MonotoneOperator,
    p: Option<RealMat>,
}

impl LureSystem {
    /// `f: R^n -> R^n`, `B: n x m`, `C: m x n`, `D: m x m`, `F` on `R^m`.
    pub fn new(
        f: LipschitzMap,
        b: RealMat,
        c: RealMat,
        d: RealMat,
        op: MonotoneOperator,
    ) -> Result<Self> {
        let n = f.dim_in();
        let m = op.dim();
        ensure_dim("f output", n, f.dim_out())?;
        ensure_dim("B rows", n, b.nrows())?;
        ensure_dim("B cols", m, b.ncols())?;
        ensure_dim("C rows", m, c.nrows())?;
        ensure_dim("C cols", n, c.ncols())?;
        ensure_dim("D rows", m, d.nrows())?;
        ensure_dim("D cols", m, d.ncols())?;
        if b.iter()
            .chain(c.iter())
            .chain(d.iter())
            .any(|v| !v.is_finite())
        {
            return Err(LureError::NonFinite("system matrices"));
        }
        Ok(LureSystem {
            f,
            b,
            c,
            d,
            op,
            p: None,
        })
    }

    /// Attaches a symmetric positive definite certificate `P`.
    pub fn with_certificate(mut self, p: RealMat) -> Result<Self> {
        let n = self.state_dim();
        ensure_dim("P rows", n, p.nrows())?;
        ensure_dim("P cols", n, p.ncols())?;
        let asym = (&p - p.transpose()).norm();
        if asym > 1e-12 * p.norm().max(1.0) {
            return Err(LureError::InvalidParameter(format!(
                "certificate P is not symmetric (||P - P^T|| = {asym:e})"
            )));
        }
        let min_eig = linalg::sym_eigenvalues(&p).first().copied().unwrap_or(0.0);
        if !(min_eig > 0.0) {
            return Err(LureError::NotPositiveDefinite {
                min_eigenvalue: min_eig,
            });
        }
        self.p = Some(p);
        Ok(self)
    }

    pub fn state_dim(&self) -> usize {
        self.f.dim_in()
    }

    pub fn feedback_dim(&self) -> usize {
        self.op.dim()
    }

    pub fn f(&self) -> &LipschitzMap {
        &self.f
    }

    pub fn b(&self) -> &RealMat {
        &self.b
    }

    pub fn c(&self) -> &RealMat {
        &self.c
    }

    pub fn d(&self) -> &RealMat {
        &self.d
    }

    pub fn op(&self) -> &MonotoneOperator {
        &self.op
    }

    pub fn p(&self) -> Option<&RealMat> {
        self.p.as_ref()
    }

    /// `P`, or the identity when none was supplied.
    pub fn certificate(&self) -> RealMat {
        self.p
            .clone()
            .unwrap_or_else(|| RealMat::identity(self.state_dim(), self.state_dim()))
    }

    pub fn pb_minus_ct(&self) -> RealMat {
        self.certificate() * &self.b - self.c.transpose()
    }

    pub fn composed_b(&self) -> Result<ComposedOperatorB> {
        ComposedOperatorB::new(self.op.clone(), self.d.clone())
    }

    pub fn composed_g(&self) -> Result<ComposedOperatorG> {
        ComposedOperatorG::new(self.composed_b()?, self.c.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Forward Euler with the classical (single-valued) sign selection.
    Explicit,
    /// `x_{n+1} = J_{hG}(x_n - h f(x_n))`.
    SemiImplicit,
    /// `0 ∈ x_{n+1} - x_n + h f(x_{n+1}) + h G(x_{n+1})`.
    FullyImplicit,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Explicit => "explicit",
            Scheme::SemiImplicit => "semi_implicit",
            Scheme::FullyImplicit => "fully_implicit",
        })
    }
}

impl FromStr for Scheme {
    type Err = LureError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "explicit" => Ok(Scheme::Explicit),
            "semi_implicit" | "semi-implicit" => Ok(Scheme::SemiImplicit),
            "fully_implicit" | "fully-implicit" => Ok(Scheme::FullyImplicit),
            other => Err(LureError::Unsupported(format!("unknown scheme `{other}`"))),
        }
    }
}

/// Sampled trajectory; `lambdas[n]` is the multiplier active at `times[n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<RealVec>,
    pub lambdas: Vec<RealVec>,
    pub scheme: Scheme,
    pub h: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn min_state_norm(&self) -> f64 {
        self.states
            .iter()
            .map(|x| x.norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn last_state(&self) -> Option<&RealVec> {
        self.states.last()
    }
}
