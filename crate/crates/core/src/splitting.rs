//! Iterative engines: Tseng forward-backward-forward, proximal point, and
//! projected forward-backward for strongly monotone variational inequalities.

use log::{debug, warn};
use serde::Serialize;

use crate::error::{ensure_dim, ensure_positive, LureError, Result};
use crate::linalg::{self, RealVec};
use crate::ops::{InnerBudget, LipschitzMap, MonotoneOperator};

/// Iterates whose norm exceeds `DIVERGENCE_FACTOR * (1 + ||x0||)` are declared divergent.
pub const DIVERGENCE_FACTOR: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Step size. `None` selects a method-specific default.
    pub gamma: Option<f64>,
    pub tol: f64,
    pub max_iter: usize,
    pub inner: InnerBudget,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            gamma: None,
            tol: 1e-8,
            max_iter: 10_000,
            inner: InnerBudget::default(),
        }
    }
}

impl SolverConfig {
    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = Some(gamma);
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    fn check(&self) -> Result<()> {
        ensure_positive("tol", self.tol)?;
        if self.max_iter == 0 {
            return Err(LureError::InvalidParameter(
                "max_iter must be positive".into(),
            ));
        }
        if let Some(g) = self.gamma {
            ensure_positive("gamma", g)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverStatus {
    Converged,
    MaxIterReached,
    Diverged,
    StepRejected,
    /// The iteration stopped but the independent inclusion check failed.
    Uncertified,
}

impl std::fmt::Display for SolverStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolverStatus::Converged => "Converged",
            SolverStatus::MaxIterReached => "MaxIterReached",
            SolverStatus::Diverged => "Diverged",
            SolverStatus::StepRejected => "StepRejected",
            SolverStatus::Uncertified => "Uncertified",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverReport {
    pub solution: RealVec,
    pub status: SolverStatus,
    pub iterations: usize,
    /// One entry per iteration.
    pub residual_history: Vec<f64>,
    /// One entry per iteration; the candidate whose residual was recorded.
    pub iterates: Vec<RealVec>,
    /// Last recorded residual.
    pub certified_residual: f64,
    /// Multiplier attached to the solution by the backward step, when known.
    pub multiplier: Option<RealVec>,
    /// Independent residual of the original inclusion, filled in by callers
    /// that know the problem structure.
    pub inclusion_residual: Option<f64>,
    /// Largest inner fixed-point residual over all outer steps, for methods
    /// whose backward step is itself iterative.
    pub max_inner_residual: Option<f64>,
    pub gamma: f64,
    pub message: Option<String>,
}

impl SolverReport {
    pub fn converged(&self) -> bool {
        self.status == SolverStatus::Converged
    }

    fn start(x0: &RealVec, gamma: f64) -> Self {
        SolverReport {
            solution: x0.clone(),
            status: SolverStatus::MaxIterReached,
            iterations: 0,
            residual_history: Vec::new(),
            iterates: Vec::new(),
            certified_residual: f64::INFINITY,
            multiplier: None,
            inclusion_residual: None,
            max_inner_residual: None,
            gamma,
            message: None,
        }
    }

    fn record(&mut self, point: &RealVec, residual: f64) {
        self.iterations += 1;
        self.residual_history.push(residual);
        self.iterates.push(point.clone());
        self.certified_residual = residual;
        self.solution = point.clone();
    }
}

/// Output of a resolvent oracle: the point and, when available, the
/// multiplier certifying it.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolventPoint {
    pub point: RealVec,
    pub multiplier: Option<RealVec>,
}

/// `x -> J_{gamma A}(x)` for some maximal monotone `A`.
pub trait ResolventOracle {
    fn dim(&self) -> usize;
    fn resolvent(&self, gamma: f64, x: &RealVec) -> Result<ResolventPoint>;
}

impl ResolventOracle for MonotoneOperator {
    fn dim(&self) -> usize {
        MonotoneOperator::dim(self)
    }

    fn resolvent(&self, gamma: f64, x: &RealVec) -> Result<ResolventPoint> {
        let point = MonotoneOperator::resolvent(self, gamma, x)?;
        let multiplier = (x - &point) / gamma;
        Ok(ResolventPoint {
            point,
            multiplier: Some(multiplier),
        })
    }
}

/// Wraps a closure as a [`ResolventOracle`].
pub struct FnResolvent<F> {
    dim: usize,
    f: F,
}

impl<F> FnResolvent<F>
where
    F: Fn(f64, &RealVec) -> Result<RealVec>,
{
    pub fn new(dim: usize, f: F) -> Self {
        FnResolvent { dim, f }
    }
}

impl<F> ResolventOracle for FnResolvent<F>
where
    F: Fn(f64, &RealVec) -> Result<RealVec>,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn resolvent(&self, gamma: f64, x: &RealVec) -> Result<ResolventPoint> {
        Ok(ResolventPoint {
            point: (self.f)(gamma, x)?,
            multiplier: None,
        })
    }
}

fn diverged(x: &RealVec, bound: f64) -> bool {
    !linalg::all_finite(x) || x.norm() > bound
}

/// Tseng's forward-backward-forward method for `0 ∈ f(x) + A(x)`:
///
/// ```text
/// y_n     = J_{gamma A}(x_n - gamma f(x_n))
/// x_{n+1} = y_n - gamma (f(y_n) - f(x_n))
/// ```
///
/// The residual is `||x_n - y_n|| / gamma` and the returned solution is the
/// last `y_n`. Convergence needs `gamma L_f < 1`; larger steps only log a
/// warning.
pub fn tseng_solve(
    ftilde: &LipschitzMap,
    resolvent: &dyn ResolventOracle,
    x0: &RealVec,
    cfg: &SolverConfig,
) -> Result<SolverReport> {
    cfg.check()?;
    let n = resolvent.dim();
    ensure_dim("forward map input", n, ftilde.dim_in())?;
    ensure_dim("forward map output", n, ftilde.dim_out())?;
    ensure_dim("initial point", n, x0.len())?;
    let lip = ftilde.lipschitz();
    let gamma = cfg.gamma.unwrap_or(if lip > 0.0 { 0.9 / lip } else { 1.0 });
    if gamma * lip >= 1.0 {
        warn!("step {gamma} violates gamma * L < 1 (L = {lip:.6}); convergence is not guaranteed");
    }
    let bound = DIVERGENCE_FACTOR * (1.0 + x0.norm());
    let mut report = SolverReport::start(x0, gamma);
    let mut x = x0.clone();
    for k in 0..cfg.max_iter {
        let fx = ftilde.eval(&x);
        let step = match resolvent.resolvent(gamma, &(&x - &fx * gamma)) {
            Ok(s) => s,
            Err(e) => {
                report.status = SolverStatus::StepRejected;
                report.message = Some(format!("backward step {k} failed: {e}"));
                return Ok(report);
            }
        };
        let y = step.point;
        let residual = (&x - &y).norm() / gamma;
        report.record(&y, residual);
        report.multiplier = step.multiplier;
        if residual <= cfg.tol {
            report.status = SolverStatus::Converged;
            debug!("tseng converged after {} iterations", k + 1);
            return Ok(report);
        }
        x = &y - (ftilde.eval(&y) - fx) * gamma;
        if diverged(&x, bound) {
            report.status = SolverStatus::Diverged;
            report.message = Some(format!(
                "iterate norm {:e} exceeds {bound:e} at iteration {}",
                x.norm(),
                k + 1
            ));
            return Ok(report);
        }
    }
    Ok(report)
}

/// Proximal point iteration `x_{n+1} = J_{gamma H}(x_n)` with residual
/// `||x_{n+1} - x_n|| / gamma`. `gamma` defaults to 1.
pub fn proximal_point_solve(
    resolvent: &dyn ResolventOracle,
    x0: &RealVec,
    cfg: &SolverConfig,
) -> Result<SolverReport> {
    cfg.check()?;
    ensure_dim("initial point", resolvent.dim(), x0.len())?;
    let gamma = cfg.gamma.unwrap_or(1.0);
    let bound = DIVERGENCE_FACTOR * (1.0 + x0.norm());
    let mut report = SolverReport::start(x0, gamma);
    let mut x = x0.clone();
    for k in 0..cfg.max_iter {
        let step = match resolvent.resolvent(gamma, &x) {
            Ok(s) => s,
            Err(e) => {
                report.status = SolverStatus::StepRejected;
                report.message = Some(format!("resolvent step {k} failed: {e}"));
                return Ok(report);
            }
        };
        let residual = (&step.point - &x).norm() / gamma;
        x = step.point;
        report.record(&x, residual);
        report.multiplier = step.multiplier;
        if residual <= cfg.tol {
            report.status = SolverStatus::Converged;
            return Ok(report);
        }
        if diverged(&x, bound) {
            report.status = SolverStatus::Diverged;
            return Ok(report);
        }
    }
    Ok(report)
}

/// Projected forward-backward `y_{k+1} = P_Omega(y_k - sigma phi(y_k))` with
/// `sigma = mu / L^2` for a `mu`-strongly monotone, `L`-Lipschitz `phi`.
pub fn fb_strongly_monotone_solve(
    phi: &LipschitzMap,
    omega: &MonotoneOperator,
    y0: &RealVec,
    cfg: &SolverConfig,
) -> Result<SolverReport> {
    ensure_dim("phi input", omega.dim(), phi.dim_in())?;
    ensure_dim("phi output", omega.dim(), phi.dim_out())?;
    fb_strongly_monotone_with(
        |y| phi.try_eval(y),
        phi.strong_modulus(),
        phi.lipschitz(),
        omega,
        y0,
        cfg,
    )
}

/// [`fb_strongly_monotone_solve`] for a fallible `phi` given by its constants.
pub fn fb_strongly_monotone_with<P>(
    phi: P,
    mu: f64,
    lipschitz: f64,
    omega: &MonotoneOperator,
    y0: &RealVec,
    cfg: &SolverConfig,
) -> Result<SolverReport>
where
    P: Fn(&RealVec) -> Result<RealVec>,
{
    cfg.check()?;
    ensure_positive("strong monotonicity modulus", mu)?;
    ensure_positive("Lipschitz constant", lipschitz)?;
    if !omega.is_normal_cone() {
        return Err(LureError::InvalidParameter(
            "the constraint operator must be a normal cone".into(),
        ));
    }
    ensure_dim("initial point", omega.dim(), y0.len())?;
    let sigma = mu / (lipschitz * lipschitz);
    let bound = DIVERGENCE_FACTOR * (1.0 + y0.norm());
    let mut report = SolverReport::start(y0, sigma);
    let mut y = y0.clone();
    for k in 0..cfg.max_iter {
        let grad = match phi(&y) {
            Ok(g) => g,
            Err(e) => {
                report.status = SolverStatus::StepRejected;
                report.message = Some(format!("operator evaluation {k} failed: {e}"));
                return Ok(report);
            }
        };
        let next = omega.resolvent(sigma, &(&y - grad * sigma))?;
        let residual = (&next - &y).norm() / sigma;
        y = next;
        report.record(&y, residual);
        if residual <= cfg.tol {
            report.status = SolverStatus::Converged;
            return Ok(report);
        }
        if diverged(&y, bound) {
            report.status = SolverStatus::Diverged;
            return Ok(report);
        }
    }
    Ok(report)
}
