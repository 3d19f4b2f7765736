use log::{debug, warn};

use crate::error::{ensure_dim, ensure_positive, LureError, Result};
use crate::linalg::{self, RealVec};
use crate::ops::{InnerBudget, LipschitzMap};
use crate::splitting::{tseng_solve, SolverConfig, SolverStatus};

use super::equilibrium::FeedbackResolvent;
use super::validate::{validate, Mode, PB_CT_TOL};
use super::{LureSystem, Scheme, Trajectory};

/// Simulates on `[0, T]` with step `h` and default inner budgets.
pub fn simulate(
    system: &LureSystem,
    scheme: Scheme,
    x0: &RealVec,
    h: f64,
    t_end: f64,
) -> Result<Trajectory> {
    simulate_with(system, scheme, x0, h, t_end, InnerBudget::default())
}

/// Number of steps is `round(T / h)`; samples are taken at `t_n = n h`.
pub fn simulate_with(
    system: &LureSystem,
    scheme: Scheme,
    x0: &RealVec,
    h: f64,
    t_end: f64,
    budget: InnerBudget,
) -> Result<Trajectory> {
    ensure_positive("h", h)?;
    ensure_positive("T", t_end)?;
    ensure_dim("initial state", system.state_dim(), x0.len())?;
    if !linalg::all_finite(x0) {
        return Err(LureError::NonFinite("initial state"));
    }
    let steps = (t_end / h).round() as usize;
    if steps == 0 {
        return Err(LureError::InvalidParameter(format!(
            "T = {t_end} is shorter than one step h = {h}"
        )));
    }
    match scheme {
        Scheme::Explicit => explicit(system, x0, h, steps),
        Scheme::SemiImplicit | Scheme::FullyImplicit => {
            require_implicit_structure(system)?;
            implicit(system, scheme, x0, h, steps, budget)
        }
    }
}

fn require_implicit_structure(system: &LureSystem) -> Result<()> {
    let gap = linalg::spectral_norm(&(system.b() - system.c().transpose()));
    if gap > PB_CT_TOL {
        return Err(LureError::Unsupported(format!(
            "implicit schemes need B = C^T (||B - C^T|| = {gap:e})"
        )));
    }
    let plain = LureSystem {
        p: None,
        ..system.clone()
    };
    if validate(&plain).mode != Mode::Strict {
        return Err(LureError::Unsupported(
            "implicit schemes need a monotone f and monotone D".into(),
        ));
    }
    Ok(())
}

fn explicit(system: &LureSystem, x0: &RealVec, h: f64, steps: usize) -> Result<Trajectory> {
    let op = system.op();
    if !op.has_full_domain() {
        return Err(LureError::Unsupported(
            "the explicit scheme needs a single-valued selection of F on the whole space".into(),
        ));
    }
    let select = |y: &RealVec| -> RealVec {
        -op.min_norm_selection(y)
            .expect("operators with full domain have a selection everywhere")
    };
    let mut traj = Trajectory {
        times: Vec::with_capacity(steps + 1),
        states: Vec::with_capacity(steps + 1),
        lambdas: Vec::with_capacity(steps + 1),
        scheme: Scheme::Explicit,
        h,
    };
    let mut x = x0.clone();
    let mut lambda = select(&(system.c() * &x));
    for n in 0..=steps {
        traj.times.push(n as f64 * h);
        traj.states.push(x.clone());
        traj.lambdas.push(lambda.clone());
        if n == steps {
            break;
        }
        let next = &x + (system.b() * &lambda - system.f().eval(&x)) * h;
        let y = system.c() * &x + system.d() * &lambda;
        lambda = select(&y);
        x = next;
        if !linalg::all_finite(&x) {
            return Err(LureError::SimulationAborted {
                step: n + 1,
                reason: "state became non-finite".into(),
                partial: Box::new(traj),
            });
        }
    }
    Ok(traj)
}

fn implicit(
    system: &LureSystem,
    scheme: Scheme,
    x0: &RealVec,
    h: f64,
    steps: usize,
    budget: InnerBudget,
) -> Result<Trajectory> {
    let g = FeedbackResolvent::new(system, budget)?;
    let lambda0 = match system.composed_b()?.evaluate(&(system.c() * x0), budget) {
        Ok(v) => -v,
        Err(e) => {
            warn!("no multiplier at the initial state ({e}); recording zeros");
            RealVec::zeros(system.feedback_dim())
        }
    };
    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![x0.clone()],
        lambdas: vec![lambda0],
        scheme,
        h,
    };
    let mut x = x0.clone();
    let scaled = FeedbackResolvent::new(system, budget)?.scaled(h);
    for n in 0..steps {
        let step = match scheme {
            Scheme::SemiImplicit => semi_implicit_step(system, &g, &x, h, budget),
            _ => fully_implicit_step(system, &scaled, &x, h, budget),
        };
        let (next, v) = match step {
            Ok(s) => s,
            Err(e) => {
                return Err(LureError::SimulationAborted {
                    step: n + 1,
                    reason: e.to_string(),
                    partial: Box::new(traj),
                })
            }
        };
        x = next;
        traj.times.push((n + 1) as f64 * h);
        traj.states.push(x.clone());
        traj.lambdas.push(-v);
    }
    debug!("{scheme} simulation finished after {steps} steps");
    Ok(traj)
}

/// `x_{n+1} = J_{hG}(x_n - h f(x_n))`.
fn semi_implicit_step(
    system: &LureSystem,
    g: &FeedbackResolvent,
    x: &RealVec,
    h: f64,
    budget: InnerBudget,
) -> Result<(RealVec, RealVec)> {
    let w = x - system.f().try_eval(x)? * h;
    let r = g.operator().resolvent(h, &w, budget)?;
    Ok((r.point, r.multiplier))
}

/// Solves `0 ∈ z - x_n + h f(z) + h G(z)` by an inner forward-backward-forward
/// loop on the strongly monotone part `z - x_n + h f(z)`.
fn fully_implicit_step(
    system: &LureSystem,
    scaled: &FeedbackResolvent,
    x: &RealVec,
    h: f64,
    budget: InnerBudget,
) -> Result<(RealVec, RealVec)> {
    let n = system.state_dim();
    let forward = LipschitzMap::sum(vec![
        LipschitzMap::identity(n),
        LipschitzMap::constant(n, -x)?,
        system.f().scaled(h)?,
    ])?;
    let cfg = SolverConfig {
        gamma: Some(0.9 / (1.0 + h * system.f().lipschitz())),
        tol: budget.tol,
        max_iter: budget.max_iter,
        inner: budget,
    };
    let r = tseng_solve(&forward, scaled, x, &cfg)?;
    if r.status != SolverStatus::Converged {
        return Err(LureError::NotConverged {
            what: "implicit step",
            iterations: r.iterations,
            residual: r.certified_residual,
            best: r.solution,
        });
    }
    let v = r
        .multiplier
        .ok_or(LureError::Singular("implicit step multiplier"))?;
    Ok((r.solution, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag, matrix, vector, RealMat};
    use crate::ops::MonotoneOperator;

    fn relay() -> LureSystem {
        LureSystem::new(
            LipschitzMap::linear(matrix(2, 2, &[9.0, -1.0, 1.0, 8.0])).unwrap(),
            RealMat::identity(2, 2),
            RealMat::identity(2, 2),
            diag(&[0.0, 1.0]),
            MonotoneOperator::sign(2).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn explicit_first_step() {
        let t = simulate(
            &relay(),
            Scheme::Explicit,
            &vector(&[1.0, 2.0]),
            0.04,
            0.04,
        )
        .unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.lambdas[0], vector(&[-1.0, -1.0]));
        assert!((&t.states[1] - vector(&[0.68, 1.28])).norm() < 1e-14);
    }

    #[test]
    fn explicit_scheme_chatters() {
        let t = simulate(
            &relay(),
            Scheme::Explicit,
            &vector(&[1.0, 2.0]),
            0.04,
            40.0,
        )
        .unwrap();
        assert_eq!(t.len(), 1001);
        assert!(t.min_state_norm() > 1e-3, "{}", t.min_state_norm());
    }

    #[test]
    fn semi_implicit_settles() {
        let t = simulate(
            &relay(),
            Scheme::SemiImplicit,
            &vector(&[1.0, 2.0]),
            0.04,
            10.0,
        )
        .unwrap();
        assert!(t.last_state().unwrap().norm() <= 1e-2);
    }

    #[test]
    fn implicit_schemes_agree() {
        let x0 = vector(&[1.0, 2.0]);
        let h = 0.04;
        let a = simulate(&relay(), Scheme::SemiImplicit, &x0, h, 5.0).unwrap();
        let b = simulate(&relay(), Scheme::FullyImplicit, &x0, h, 5.0).unwrap();
        let gap = a
            .states
            .iter()
            .zip(&b.states)
            .map(|(p, q)| (p - q).amax())
            .fold(0.0, f64::max);
        assert!(gap <= 5.0 * h * (1.0 + x0.norm()), "{gap}");
        assert!(b.last_state().unwrap().norm() < 1e-6);
    }

    #[test]
    fn explicit_without_feedback_is_forward_euler() {
        let a = matrix(2, 2, &[1.0, 2.0, -2.0, 1.0]);
        let sys = LureSystem::new(
            LipschitzMap::linear(a.clone()).unwrap(),
            RealMat::identity(2, 2),
            RealMat::identity(2, 2),
            RealMat::zeros(2, 2),
            MonotoneOperator::zero(2).unwrap(),
        )
        .unwrap();
        let t = simulate(&sys, Scheme::Explicit, &vector(&[1.0, -1.0]), 0.1, 1.0).unwrap();
        let mut x = vector(&[1.0, -1.0]);
        for s in &t.states {
            assert_eq!(s, &x);
            x = &x - &a * &x * 0.1;
        }
    }

    #[test]
    fn implicit_needs_b_equal_ct() {
        let sys = LureSystem::new(
            LipschitzMap::identity(1),
            matrix(1, 1, &[2.0]),
            matrix(1, 1, &[1.0]),
            diag(&[1.0]),
            MonotoneOperator::sign(1).unwrap(),
        )
        .unwrap();
        let err = simulate(&sys, Scheme::FullyImplicit, &vector(&[1.0]), 0.1, 1.0);
        assert!(matches!(err, Err(LureError::Unsupported(_))));
    }

    #[test]
    fn explicit_needs_full_domain() {
        let sys = LureSystem::new(
            LipschitzMap::identity(1),
            matrix(1, 1, &[1.0]),
            matrix(1, 1, &[1.0]),
            diag(&[0.0]),
            MonotoneOperator::normal_cone_box(vec![-1.0], vec![1.0]).unwrap(),
        )
        .unwrap();
        let err = simulate(&sys, Scheme::Explicit, &vector(&[0.5]), 0.1, 1.0);
        assert!(matches!(err, Err(LureError::Unsupported(_))));
    }
}
