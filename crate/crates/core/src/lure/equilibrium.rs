use std::cell::Cell;

use log::{info, warn};

use crate::composite::{ComposedOperatorG, PassiveResolvent};
use crate::error::{ensure_dim, LureError, Result};
use crate::linalg::{self, RealVec};
use crate::ops::InnerBudget;
use crate::splitting::{
    proximal_point_solve, tseng_solve, ResolventOracle, ResolventPoint, SolverConfig, SolverReport,
    SolverStatus,
};

use super::validate::{validate, Mode};
use super::LureSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Forward-backward-forward when `PB = C^T`, proximal point otherwise.
    Auto,
    /// Forward-backward-forward on `Pf + C^T B C`. Requires `PB = C^T`; a
    /// non-monotone `Pf` is admitted with a warning.
    Forward,
    /// Proximal point on `H = g + G`.
    ProximalPoint,
}

/// Resolvent oracle of `G = C^T (F^{-1} + D)^{-1} C` that reports the
/// multiplier `v ∈ B(Cy)` with each point.
pub struct FeedbackResolvent {
    g: ComposedOperatorG,
    budget: InnerBudget,
    scale: f64,
}

impl FeedbackResolvent {
    pub fn new(system: &LureSystem, budget: InnerBudget) -> Result<Self> {
        Ok(FeedbackResolvent {
            g: system.composed_g()?,
            budget,
            scale: 1.0,
        })
    }

    /// Oracle for `s G` with `s > 0`.
    pub fn scaled(mut self, s: f64) -> Self {
        self.scale = s;
        self
    }

    pub fn operator(&self) -> &ComposedOperatorG {
        &self.g
    }
}

impl ResolventOracle for FeedbackResolvent {
    fn dim(&self) -> usize {
        self.g.dim()
    }

    fn resolvent(&self, gamma: f64, x: &RealVec) -> Result<ResolventPoint> {
        let r = self.g.resolvent(gamma * self.scale, x, self.budget)?;
        Ok(ResolventPoint {
            point: r.point,
            multiplier: Some(r.multiplier),
        })
    }
}

struct PassiveOracle<'a> {
    inner: PassiveResolvent<'a>,
    dim: usize,
    worst: Cell<f64>,
}

impl ResolventOracle for PassiveOracle<'_> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn resolvent(&self, gamma: f64, x: &RealVec) -> Result<ResolventPoint> {
        let r = self.inner.resolvent(gamma, x)?;
        self.worst.set(self.worst.get().max(r.fixed_point_residual));
        Ok(ResolventPoint {
            point: r.point,
            multiplier: Some(r.multiplier),
        })
    }
}

/// Residual of `0 ∈ f(x) + B (F^{-1} + D)^{-1}(Cx)`, computed independently
/// of the solver that produced `x`.
///
/// For each candidate multiplier `v` (the one supplied, and one evaluated
/// from `B(Cx)`), the residual is `||f(x) + Bv||` plus the natural residual
/// of `v ∈ F(Cx - Dv)`; the smallest value is returned.
pub fn inclusion_residual(
    system: &LureSystem,
    x: &RealVec,
    multiplier: Option<&RealVec>,
    budget: InnerBudget,
) -> Result<f64> {
    ensure_dim("equilibrium candidate", system.state_dim(), x.len())?;
    let fx = system.f().try_eval(x)?;
    let cx = system.c() * x;
    let score = |v: &RealVec| -> Result<f64> {
        let forward = (&fx + system.b() * v).norm();
        let arg = &cx - system.d() * v;
        Ok(forward + system.op().natural_residual(&arg, v)?)
    };
    let mut best = f64::INFINITY;
    if let Some(v) = multiplier {
        ensure_dim("multiplier", system.feedback_dim(), v.len())?;
        best = score(v)?;
    }
    if let Ok(v) = system.composed_b()?.evaluate(&cx, budget) {
        best = best.min(score(&v)?);
    }
    Ok(best)
}

/// Solves `0 ∈ f(x) + B (F^{-1} + D)^{-1}(Cx)` from `x0` with the route
/// chosen by [`validate`].
pub fn equilibrium(system: &LureSystem, x0: &RealVec, cfg: &SolverConfig) -> Result<SolverReport> {
    equilibrium_with(system, x0, cfg, Route::Auto)
}

pub fn equilibrium_with(
    system: &LureSystem,
    x0: &RealVec,
    cfg: &SolverConfig,
    route: Route,
) -> Result<SolverReport> {
    ensure_dim("initial point", system.state_dim(), x0.len())?;
    let report = validate(system);
    for w in &report.warnings {
        info!("validation: {w}");
    }
    let route = match route {
        Route::Auto => match report.mode {
            Mode::Strict => Route::Forward,
            Mode::Passive => Route::ProximalPoint,
            Mode::Invalid => {
                return Err(LureError::InvalidSystem(describe_invalid(&report)));
            }
        },
        Route::Forward => {
            if !report.pb_equals_ct {
                return Err(LureError::InvalidSystem(format!(
                    "forward-backward-forward needs PB = C^T (||PB - C^T|| = {:e})",
                    report.pb_minus_ct_norm
                )));
            }
            if !report.d_monotone {
                return Err(LureError::InvalidSystem("D is not monotone".into()));
            }
            if !report.pf_monotone {
                warn!("Pf is not monotone; success is judged by certification only");
            }
            Route::Forward
        }
        Route::ProximalPoint => {
            if !(report.passivity_psd && report.d_monotone && report.d_semicoercive.is_some()) {
                return Err(LureError::InvalidSystem(describe_invalid(&report)));
            }
            Route::ProximalPoint
        }
    };

    let mut out = match route {
        Route::Forward => {
            let ftilde = match system.p() {
                Some(p) => system.f().premultiply(p)?,
                None => system.f().clone(),
            };
            let oracle = FeedbackResolvent::new(system, cfg.inner)?;
            tseng_solve(&ftilde, &oracle, x0, cfg)?
        }
        _ => {
            let inner = PassiveResolvent::new(system, cfg.inner)?;
            let lg = inner.lipschitz();
            let cap = if lg > 0.0 { 0.5 / lg } else { f64::INFINITY };
            let gamma = cfg.gamma.unwrap_or(cap).min(cap);
            let gamma = if gamma.is_finite() { gamma } else { 1.0 };
            info!("proximal point with gamma = {gamma} (L_g = {lg:.6})");
            let oracle = PassiveOracle {
                inner,
                dim: system.state_dim(),
                worst: Cell::new(0.0),
            };
            let mut r = proximal_point_solve(
                &oracle,
                x0,
                &SolverConfig {
                    gamma: Some(gamma),
                    ..*cfg
                },
            )?;
            r.max_inner_residual = Some(oracle.worst.get());
            r
        }
    };

    if linalg::all_finite(&out.solution) {
        let residual =
            inclusion_residual(system, &out.solution, out.multiplier.as_ref(), cfg.inner)?;
        out.inclusion_residual = Some(residual);
        if out.status == SolverStatus::Converged && residual > 10.0 * cfg.tol {
            out.status = SolverStatus::Uncertified;
            out.message = Some(format!(
                "iteration stopped but the inclusion residual is {residual:e}; the range condition may be violated"
            ));
        }
    }
    Ok(out)
}

fn describe_invalid(report: &super::ValidationReport) -> String {
    let mut reasons = Vec::new();
    if !report.d_monotone {
        reasons.push("D is not monotone".to_string());
    }
    if !report.pb_equals_ct && !report.passivity_psd {
        reasons.push(format!(
            "PB != C^T (norm {:e}) and the passivity test fails",
            report.pb_minus_ct_norm
        ));
    }
    if !report.pf_monotone && report.pb_equals_ct {
        reasons.push("Pf is not monotone".to_string());
    }
    if report.d_semicoercive.is_none() && !report.pb_equals_ct {
        reasons.push("D is not semi-coercive".to_string());
    }
    if reasons.is_empty() {
        reasons.push("assumptions not met".to_string());
    }
    reasons.join("; ")
}
