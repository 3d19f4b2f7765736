//! Quasi-variational inequalities with moving set `K(x) = Omega - D f(x)`:
//!
//! ```text
//! find x ∈ K(x) with 0 ∈ f(x) + N_{K(x)}(x)
//! ```
//!
//! equivalently `0 ∈ f(x) + N_Omega(x + D f(x))`, i.e. the Lur'e inclusion
//! with `B = C = I` and `F = N_Omega`. When `f` is strongly monotone the
//! substitution `y = x + D f(x)` gives the strongly monotone variational
//! inequality `0 ∈ Phi(y) + N_Omega(y)` with `Phi = (f^{-1} + D)^{-1}`.

use log::warn;

use crate::error::{ensure_dim, ensure_positive, LureError, Result};
use crate::linalg::{self, RealMat, RealVec};
use crate::lure::{equilibrium_with, LureSystem, Route};
use crate::ops::{InnerBudget, LipschitzMap, MonotoneOperator, OperatorKind};
use crate::splitting::{fb_strongly_monotone_with, SolverConfig, SolverReport, SolverStatus};

/// Membership tolerance for `x ∈ K(x)`.
pub const MOVING_SET_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct QviProblem {
    f: LipschitzMap,
    d: RealMat,
    omega: MonotoneOperator,
}

impl QviProblem {
    /// `omega` must be a normal cone; its set is `Omega`.
    pub fn new(f: LipschitzMap, d: RealMat, omega: MonotoneOperator) -> Result<Self> {
        if !omega.is_normal_cone() {
            return Err(LureError::InvalidParameter(
                "Omega must be given by a normal cone (box, ball, orthant or a product of these)"
                    .into(),
            ));
        }
        Self::general(f, d, omega)
    }

    /// `0 ∈ f(x) + F(x + D f(x))` for any catalog operator `F`.
    pub fn general(f: LipschitzMap, d: RealMat, op: MonotoneOperator) -> Result<Self> {
        let n = op.dim();
        ensure_dim("f input", n, f.dim_in())?;
        ensure_dim("f output", n, f.dim_out())?;
        ensure_dim("D rows", n, d.nrows())?;
        ensure_dim("D cols", n, d.ncols())?;
        let min = linalg::min_sym_eigenvalue(&d);
        if min < -1e-12 * linalg::spectral_norm(&d).max(1.0) {
            return Err(LureError::NotMonotone(format!(
                "D + D^T has eigenvalue {:e}",
                2.0 * min
            )));
        }
        Ok(QviProblem { f, d, omega: op })
    }

    pub fn dim(&self) -> usize {
        self.omega.dim()
    }

    pub fn f(&self) -> &LipschitzMap {
        &self.f
    }

    pub fn d(&self) -> &RealMat {
        &self.d
    }

    pub fn omega(&self) -> &MonotoneOperator {
        &self.omega
    }
}

/// The Lur'e system `(f, I, I, D, N_Omega)` with `P = I`.
pub fn qvi_to_inclusion(p: &QviProblem) -> Result<LureSystem> {
    let n = p.dim();
    LureSystem::new(
        p.f.clone(),
        RealMat::identity(n, n),
        RealMat::identity(n, n),
        p.d.clone(),
        p.omega.clone(),
    )?
    .with_certificate(RealMat::identity(n, n))
}

#[derive(Debug, Clone, PartialEq)]
pub enum MovingSet {
    Box {
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
    Ball {
        center: RealVec,
        radius: f64,
    },
    /// No closed-form description (products of mixed kinds, general `F`).
    Opaque,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MovingSetCheck {
    pub set: MovingSet,
    /// `d(x, K(x)) = d(x + D f(x), Omega)`.
    pub distance: f64,
    pub contains: bool,
}

/// Describes `K(x) = Omega - D f(x)` and tests `x ∈ K(x)`.
pub fn moving_set_check(p: &QviProblem, x: &RealVec) -> Result<MovingSetCheck> {
    ensure_dim("point", p.dim(), x.len())?;
    let shift = &p.d * p.f.try_eval(x)?;
    let set = if let Some((lo, hi)) = box_bounds(&p.omega) {
        MovingSet::Box {
            lo: lo.iter().zip(shift.iter()).map(|(l, s)| l - s).collect(),
            hi: hi.iter().zip(shift.iter()).map(|(h, s)| h - s).collect(),
        }
    } else if let OperatorKind::NormalConeBall { center, radius } = p.omega.kind() {
        MovingSet::Ball {
            center: center - &shift,
            radius: *radius,
        }
    } else {
        MovingSet::Opaque
    };
    let distance = p.omega.domain_distance(&(x + &shift));
    Ok(MovingSetCheck {
        set,
        distance,
        contains: distance <= MOVING_SET_TOL,
    })
}

/// Bounds of a box, orthant, or product of these.
fn box_bounds(op: &MonotoneOperator) -> Option<(Vec<f64>, Vec<f64>)> {
    match op.kind() {
        OperatorKind::NormalConeBox { lo, hi } => Some((lo.clone(), hi.clone())),
        OperatorKind::NormalConeNonnegOrthant => {
            Some((vec![0.0; op.dim()], vec![f64::INFINITY; op.dim()]))
        }
        OperatorKind::Product(blocks) => {
            let mut lo = Vec::with_capacity(op.dim());
            let mut hi = Vec::with_capacity(op.dim());
            for b in blocks {
                let (l, h) = box_bounds(b)?;
                lo.extend(l);
                hi.extend(h);
            }
            Some((lo, hi))
        }
        _ => None,
    }
}

/// Residual of the QVI form `-f(x) ∈ N_Omega(x + D f(x))`, measured by the
/// natural residual of the normal cone inclusion.
pub fn qvi_residual(p: &QviProblem, x: &RealVec) -> Result<f64> {
    ensure_dim("point", p.dim(), x.len())?;
    let fx = p.f.try_eval(x)?;
    let shifted = x + &p.d * &fx;
    p.omega.natural_residual(&shifted, &(-fx))
}

/// Solves the QVI through its inclusion form. A non-monotone `f` is
/// admitted with a warning; success is then judged by certification.
///
/// The report's `inclusion_residual` holds the larger of the inclusion-form
/// and QVI-form residuals.
pub fn solve_qvi(p: &QviProblem, x0: &RealVec, cfg: &SolverConfig) -> Result<SolverReport> {
    let system = qvi_to_inclusion(p)?;
    let mut report = equilibrium_with(&system, x0, cfg, Route::Forward)?;
    if linalg::all_finite(&report.solution) {
        let q = qvi_residual(p, &report.solution)?;
        let worst = report.inclusion_residual.unwrap_or(0.0).max(q);
        report.inclusion_residual = Some(worst);
        if report.status == SolverStatus::Converged && worst > 10.0 * cfg.tol {
            report.status = SolverStatus::Uncertified;
            report.message = Some(format!(
                "QVI residual {q:e} exceeds the certification bound"
            ));
        }
    }
    Ok(report)
}

/// Constants of `f^{-1}` and `Phi = (f^{-1} + D)^{-1}` for a `mu`-strongly
/// monotone, `L`-Lipschitz `f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualConstants {
    /// Strong monotonicity of `f^{-1}`: `mu / L^2`.
    pub mu_inv: f64,
    /// Lipschitz constant of `f^{-1}`: `1 / mu`.
    pub lip_inv: f64,
    /// `(mu / L^2) / (1 / mu + ||D||)^2`.
    pub mu_phi: f64,
    /// `L^2 / mu`.
    pub lip_phi: f64,
}

impl DualConstants {
    /// Contraction factor of projected forward-backward with step `mu_phi / lip_phi^2`.
    pub fn contraction_bound(&self) -> f64 {
        (1.0 - (self.mu_phi / self.lip_phi).powi(2)).max(0.0).sqrt()
    }
}

pub fn dual_constants(f: &LipschitzMap, d: &RealMat) -> Result<DualConstants> {
    let mu = f.strong_modulus();
    let l = f.lipschitz();
    ensure_positive("strong monotonicity modulus of f", mu)?;
    ensure_positive("Lipschitz constant of f", l)?;
    let mu_inv = mu / (l * l);
    let lip_inv = 1.0 / mu;
    let lip_sum = lip_inv + linalg::spectral_norm(d);
    Ok(DualConstants {
        mu_inv,
        lip_inv,
        mu_phi: mu_inv / (lip_sum * lip_sum),
        lip_phi: l * l / mu,
    })
}

/// `Phi(y) = (f^{-1} + D)^{-1}(y)`: the `u` with `u = f(y - D u)`.
///
/// Affine `f(x) = Ax + b` solves `(I + AD) u = Ay + b`. Otherwise the fixed
/// point `u -> f(y - Du)` is iterated when `L ||D|| < 1`; failing that,
/// `y ∈ f^{-1}(u) + Du` is solved by forward steps on the strongly monotone
/// map `f^{-1} + D`, with `f^{-1}` evaluated by an inner forward loop.
pub fn eval_phi(
    f: &LipschitzMap,
    d: &RealMat,
    y: &RealVec,
    budget: InnerBudget,
) -> Result<RealVec> {
    let n = y.len();
    ensure_dim("Phi argument", f.dim_in(), n)?;
    if d.iter().all(|v| *v == 0.0) {
        return f.try_eval(y);
    }
    if let Some((a, b)) = f.as_affine() {
        let m = RealMat::identity(n, n) + a * d;
        return linalg::solve(&m, &(a * y + b)).ok_or(LureError::Singular("I + AD"));
    }
    let l = f.lipschitz();
    let dn = linalg::spectral_norm(d);
    let defect = |u: &RealVec| -> Result<f64> { Ok((f.try_eval(&(y - d * u))? - u).norm()) };
    let mut u = f.try_eval(y)?;
    if l * dn < 1.0 {
        for _ in 0..budget.max_iter {
            u = f.try_eval(&(y - d * &u))?;
            if defect(&u)? <= budget.tol {
                return Ok(u);
            }
        }
        return Err(LureError::NotConverged {
            what: "fixed point of u = f(y - Du)",
            iterations: budget.max_iter,
            residual: defect(&u)?,
            best: u,
        });
    }
    let c = dual_constants(f, d)?;
    let tau = c.mu_inv / (c.lip_inv + dn).powi(2);
    let inner_step = f.strong_modulus() / (l * l);
    let mut x = y - d * &u;
    let mut residual = f64::INFINITY;
    for _ in 0..budget.max_iter {
        // x ≈ f^{-1}(u), warm-started from the previous value.
        let mut inner_ok = false;
        for _ in 0..budget.max_iter {
            let r = f.try_eval(&x)? - &u;
            x -= &r * inner_step;
            if r.norm() <= budget.tol * 1e-2 {
                inner_ok = true;
                break;
            }
        }
        if !inner_ok {
            return Err(LureError::NotConverged {
                what: "inverse evaluation of f",
                iterations: budget.max_iter,
                residual: (f.try_eval(&x)? - &u).norm(),
                best: u,
            });
        }
        u -= (&x + d * &u - y) * tau;
        residual = defect(&u)?;
        if residual <= budget.tol {
            return Ok(u);
        }
    }
    Err(LureError::NotConverged {
        what: "evaluation of (f^-1 + D)^-1",
        iterations: budget.max_iter,
        residual,
        best: u,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualSolution {
    /// Iteration report in the `y` variable.
    pub report: SolverReport,
    pub y: RealVec,
    /// `x = y - D Phi(y)`.
    pub x: RealVec,
    pub constants: DualConstants,
    /// Largest observed ratio `||y_{k+1} - y*|| / ||y_k - y*||`.
    pub observed_contraction: f64,
}

/// Solves `0 ∈ Phi(y) + N_Omega(y)` by projected forward-backward and
/// recovers `x = y - D Phi(y)`. `y0` defaults to the projection of 0 onto
/// `Omega`.
pub fn solve_qvi_dual(
    p: &QviProblem,
    y0: Option<&RealVec>,
    cfg: &SolverConfig,
) -> Result<DualSolution> {
    if !p.omega.is_normal_cone() {
        return Err(LureError::Unsupported(
            "the dual route needs Omega given by a normal cone".into(),
        ));
    }
    let constants = dual_constants(&p.f, &p.d)?;
    let n = p.dim();
    let start = match y0 {
        Some(y) => {
            ensure_dim("initial point", n, y.len())?;
            y.clone()
        }
        None => p.omega.project_domain(&RealVec::zeros(n)),
    };
    let phi = |y: &RealVec| eval_phi(&p.f, &p.d, y, cfg.inner);
    let report = fb_strongly_monotone_with(
        phi,
        constants.mu_phi,
        constants.lip_phi,
        &p.omega,
        &start,
        cfg,
    )?;
    if !report.converged() {
        warn!("dual iteration stopped with status {}", report.status);
    }
    let y = report.solution.clone();
    let x = &y - &p.d * phi(&y)?;

    let floor = 1e-12 * (1.0 + y.norm());
    let mut errors = vec![(&start - &y).norm()];
    errors.extend(report.iterates.iter().map(|yk| (yk - &y).norm()));
    let observed_contraction = errors
        .windows(2)
        .filter(|w| w[0] > floor)
        .map(|w| w[1] / w[0])
        .fold(0.0, f64::max);

    Ok(DualSolution {
        report,
        y,
        x,
        constants,
        observed_contraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag, matrix, vector};
    use crate::ops::ScalarNonlinearity;

    fn one_dim() -> QviProblem {
        QviProblem::new(
            LipschitzMap::affine(matrix(1, 1, &[1.0]), vector(&[-2.0])).unwrap(),
            diag(&[0.5]),
            MonotoneOperator::normal_cone_box(vec![-1.0], vec![1.0]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn requires_normal_cone() {
        let err = QviProblem::new(
            LipschitzMap::identity(1),
            diag(&[0.0]),
            MonotoneOperator::sign(1).unwrap(),
        );
        assert!(err.is_err());
        assert!(QviProblem::general(
            LipschitzMap::identity(1),
            diag(&[0.0]),
            MonotoneOperator::sign(1).unwrap()
        )
        .is_ok());
    }

    #[test]
    fn primal_one_dim() {
        let r = solve_qvi(&one_dim(), &vector(&[0.0]), &SolverConfig::default()).unwrap();
        assert!(r.converged(), "{r:?}");
        assert!((r.solution[0] - 4.0 / 3.0).abs() < 1e-7);
    }

    #[test]
    fn moving_set_at_solution() {
        let c = moving_set_check(&one_dim(), &vector(&[4.0 / 3.0])).unwrap();
        match c.set {
            MovingSet::Box { lo, hi } => {
                assert!((lo[0] + 2.0 / 3.0).abs() < 1e-15);
                assert!((hi[0] - 4.0 / 3.0).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
        assert!(c.contains);
        assert!(
            !moving_set_check(&one_dim(), &vector(&[1.5]))
                .unwrap()
                .contains
        );
    }

    #[test]
    fn dual_one_dim() {
        let s = solve_qvi_dual(&one_dim(), None, &SolverConfig::default()).unwrap();
        assert!(s.report.converged());
        assert!((s.y[0] - 1.0).abs() < 1e-10);
        assert!((s.x[0] - 4.0 / 3.0).abs() < 1e-10);
        assert!(s.observed_contraction <= s.constants.contraction_bound() + 0.05);
    }

    #[test]
    fn dual_constants_examples() {
        let c = dual_constants(&LipschitzMap::identity(1), &diag(&[0.0])).unwrap();
        assert_eq!(
            (c.mu_inv, c.lip_inv, c.mu_phi, c.lip_phi),
            (1.0, 1.0, 1.0, 1.0)
        );
        let c = dual_constants(one_dim().f(), &diag(&[0.5])).unwrap();
        assert!((c.mu_phi - 1.0 / 2.25).abs() < 1e-15);
        assert_eq!(c.lip_phi, 1.0);
        let two = LipschitzMap::linear(diag(&[2.0])).unwrap();
        let c = dual_constants(&two, &diag(&[0.0])).unwrap();
        assert_eq!(
            (c.mu_inv, c.lip_inv, c.mu_phi, c.lip_phi),
            (0.5, 0.5, 2.0, 2.0)
        );
        assert!(dual_constants(&LipschitzMap::zero(1), &diag(&[0.0])).is_err());
    }

    #[test]
    fn phi_examples() {
        let b = InnerBudget::default();
        let two = LipschitzMap::linear(diag(&[2.0])).unwrap();
        assert!(
            (eval_phi(&two, &diag(&[0.5]), &vector(&[3.0]), b).unwrap()[0] - 3.0).abs() < 1e-14
        );
        let phi = eval_phi(one_dim().f(), &diag(&[0.5]), &vector(&[1.0]), b).unwrap();
        assert!((phi[0] + 2.0 / 3.0).abs() < 1e-14);
        assert_eq!(
            eval_phi(&two, &diag(&[0.0]), &vector(&[3.0]), b).unwrap()[0],
            6.0
        );
    }

    #[test]
    fn phi_nonlinear_routes() {
        // f(x) = 2x + tanh(x): mu = 2, L = 3.
        let f = LipschitzMap::sum(vec![
            LipschitzMap::linear(diag(&[2.0, 2.0])).unwrap(),
            LipschitzMap::componentwise(2, ScalarNonlinearity::Tanh, 1.0).unwrap(),
        ])
        .unwrap()
        .with_strong_modulus(2.0);
        let y = vector(&[0.7, -1.3]);
        let b = InnerBudget::default();
        for d in [diag(&[0.1, 0.2]), diag(&[0.5, 1.0])] {
            let u = eval_phi(&f, &d, &y, b).unwrap();
            assert!((f.eval(&(&y - &d * &u)) - &u).norm() <= 1e-10);
        }
    }

    #[test]
    fn unconstrained_and_projected_minimizers() {
        let a = 0.4;
        let shifted = LipschitzMap::affine(matrix(1, 1, &[1.0]), vector(&[-a])).unwrap();
        let boxed = MonotoneOperator::normal_cone_box(vec![-1.0], vec![1.0]).unwrap();
        let p = QviProblem::new(shifted, diag(&[0.0]), boxed.clone()).unwrap();
        let r = solve_qvi(&p, &vector(&[0.0]), &SolverConfig::default()).unwrap();
        assert!((r.solution[0] - a).abs() < 1e-7);
        let far = LipschitzMap::affine(matrix(1, 1, &[1.0]), vector(&[-5.0])).unwrap();
        let p = QviProblem::new(far, diag(&[0.0]), boxed).unwrap();
        let r = solve_qvi(&p, &vector(&[0.0]), &SolverConfig::default()).unwrap();
        assert!((r.solution[0] - 1.0).abs() < 1e-7);
        let s = solve_qvi_dual(&p, None, &SolverConfig::default()).unwrap();
        assert!((s.x[0] - 1.0).abs() < 1e-9 && (s.y[0] - 1.0).abs() < 1e-9);
    }
}
