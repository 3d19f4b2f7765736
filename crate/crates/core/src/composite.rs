//! Resolvent calculus for the feedback operator `B = (F^{-1} + D)^{-1}`,
//! its congruence `G = C^T B C`, and the general passive operator
//! `H = g + G` with the single-valued forward part
//! `g(x) = Pf(x) + (PB - C^T) B(Cx)`.

use crate::error::{ensure_dim, ensure_positive, LureError, Result};
use crate::linalg::{self, RealMat, RealVec, EIG_ZERO};
use crate::lure::LureSystem;
use crate::ops::{resolvent_wrt, InnerBudget, MonotoneOperator, PositiveDefiniteMap};

/// `(F^{-1} + D)^{-1}` for a catalog `F` and a monotone square `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComposedOperatorB {
    op: MonotoneOperator,
    d: RealMat,
    d_is_zero: bool,
}

/// Output of a resolvent step of `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct BResolvent {
    /// `y = J_{gamma B}(x)`.
    pub point: RealVec,
    /// `(x - y) / gamma`, an element of `B(y)`.
    pub multiplier: RealVec,
    /// `z = y - D * multiplier`, the point where `multiplier ∈ F(z)`.
    pub graph_point: RealVec,
}

impl ComposedOperatorB {
    pub fn new(op: MonotoneOperator, d: RealMat) -> Result<Self> {
        ensure_dim("feedthrough D rows", op.dim(), d.nrows())?;
        ensure_dim("feedthrough D cols", op.dim(), d.ncols())?;
        let min_eig = linalg::min_sym_eigenvalue(&d);
        if min_eig < -1e-12 * linalg::spectral_norm(&d).max(1.0) {
            return Err(LureError::NotMonotone(format!(
                "D + D^T has eigenvalue {:e}",
                2.0 * min_eig
            )));
        }
        let d_is_zero = d.iter().all(|v| *v == 0.0);
        Ok(ComposedOperatorB { op, d, d_is_zero })
    }

    pub fn op(&self) -> &MonotoneOperator {
        &self.op
    }

    pub fn d(&self) -> &RealMat {
        &self.d
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// `J_{gamma B}(x) = E(gamma J^E_F(Ex) + Dx)` with `E = (gamma I + D)^{-1}`.
    pub fn resolvent(&self, gamma: f64, x: &RealVec, budget: InnerBudget) -> Result<RealVec> {
        Ok(self.resolvent_parts(gamma, x, budget)?.point)
    }

    pub fn resolvent_parts(
        &self,
        gamma: f64,
        x: &RealVec,
        budget: InnerBudget,
    ) -> Result<BResolvent> {
        ensure_positive("gamma", gamma)?;
        ensure_dim("resolvent argument", self.dim(), x.len())?;
        if self.d_is_zero {
            let y = self.op.resolvent(gamma, x)?;
            let multiplier = (x - &y) / gamma;
            return Ok(BResolvent {
                graph_point: y.clone(),
                point: y,
                multiplier,
            });
        }
        let n = self.dim();
        let shifted = &self.d + RealMat::identity(n, n) * gamma;
        let e = linalg::inverse(&shifted).ok_or(LureError::Singular("gamma I + D"))?;
        let metric = PositiveDefiniteMap::new(e.clone())?;
        let ex = &e * x;
        let z = resolvent_wrt(&self.op, &metric, &ex, budget)?;
        let point = &e * (&z * gamma + &self.d * x);
        let multiplier = &ex - &e * &z;
        Ok(BResolvent {
            point,
            multiplier,
            graph_point: z,
        })
    }

    /// `J_{sigma B^{-1}}(u) = u - sigma J_{B/sigma}(u/sigma)`. The returned
    /// value `v` lies in `B(p)` where `p` is the second component.
    pub fn inverse_resolvent(
        &self,
        sigma: f64,
        u: &RealVec,
        budget: InnerBudget,
    ) -> Result<(RealVec, RealVec)> {
        ensure_positive("sigma", sigma)?;
        let p = self.resolvent(1.0 / sigma, &(u / sigma), budget)?;
        Ok((u - &p * sigma, p))
    }

    /// Some element `v ∈ B(c)`, i.e. `v ∈ F(c - Dv)`. When `B(c)` is not a
    /// singleton the element returned depends on the evaluation path.
    pub fn evaluate(&self, c: &RealVec, budget: InnerBudget) -> Result<RealVec> {
        ensure_dim("B argument", self.dim(), c.len())?;
        if !linalg::all_finite(c) {
            return Err(LureError::NonFinite("B argument"));
        }
        let n = self.dim();
        if self.d_is_zero {
            return self
                .op
                .min_norm_selection(c)
                .ok_or_else(|| LureError::OutsideDomain {
                    distance: self.op.domain_distance(c),
                });
        }
        if let Some(m) = self.op.linear_matrix() {
            let sys = RealMat::identity(n, n) + &m * &self.d;
            return linalg::solve(&sys, &(&m * c)).ok_or(LureError::Singular("I + MD"));
        }
        if linalg::is_diagonal(&self.d) {
            if let Some(parts) = self.op.componentwise_parts() {
                return self.evaluate_separable(&parts, c);
            }
        }
        if let Some(d) = linalg::scalar_multiple_of_identity(&self.d) {
            // (F^{-1} + dI)^{-1} is the Yosida approximation (I - J_{dF}) / d.
            return Ok((c - self.op.resolvent(d, c)?) / d);
        }
        self.evaluate_tseng(c, budget)
    }

    fn evaluate_separable(&self, parts: &[MonotoneOperator], c: &RealVec) -> Result<RealVec> {
        let mut v = RealVec::zeros(c.len());
        let mut outside = 0.0;
        for (i, part) in parts.iter().enumerate() {
            let ci = RealVec::from_element(1, c[i]);
            let di = self.d[(i, i)];
            if di > 0.0 {
                v[i] = (c[i] - part.resolvent(di, &ci)?[0]) / di;
            } else {
                match part.min_norm_selection(&ci) {
                    Some(s) => v[i] = s[0],
                    None => outside += part.domain_distance(&ci).powi(2),
                }
            }
        }
        if outside > 0.0 {
            return Err(LureError::OutsideDomain {
                distance: outside.sqrt(),
            });
        }
        Ok(v)
    }

    /// Tseng splitting on `0 ∈ F^{-1}(v) + (Dv - c)` with step `0.9 / ||D||`.
    fn evaluate_tseng(&self, c: &RealVec, budget: InnerBudget) -> Result<RealVec> {
        let sigma = 0.9 / linalg::spectral_norm(&self.d);
        let mut v = RealVec::zeros(c.len());
        let mut residual = f64::INFINITY;
        for k in 0..budget.max_iter {
            let dv = &self.d * &v;
            let u = self
                .op
                .inverse_resolvent(sigma, &(&v - (&dv - c) * sigma))?;
            residual = (&v - &u).norm() / sigma;
            if residual <= budget.tol {
                return Ok(u);
            }
            v = &u - (&self.d * &u - dv) * sigma;
            if !linalg::all_finite(&v) {
                return Err(LureError::NotConverged {
                    what: "evaluation of (F^-1 + D)^-1 (value possibly empty)",
                    iterations: k + 1,
                    residual,
                    best: u,
                });
            }
        }
        Err(LureError::NotConverged {
            what: "evaluation of (F^-1 + D)^-1 (value possibly empty)",
            iterations: budget.max_iter,
            residual,
            best: v,
        })
    }

    /// Certification residual of `v ∈ B(c)`, i.e. of `v ∈ F(c - Dv)`.
    pub fn membership_residual(&self, c: &RealVec, v: &RealVec) -> Result<f64> {
        self.op.natural_residual(&(c - &self.d * v), v)
    }
}

/// `G = C^T B C`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComposedOperatorG {
    b: ComposedOperatorB,
    c: RealMat,
    c_is_identity: bool,
    cct_norm: f64,
}

/// Output of a resolvent step of `G`.
#[derive(Debug, Clone, PartialEq)]
pub struct GResolvent {
    /// `y = J_{gamma G}(w)`.
    pub point: RealVec,
    /// `v ∈ B(Cy)` with `y = w - gamma C^T v`.
    pub multiplier: RealVec,
    pub iterations: usize,
    /// Final dual defect (zero on the direct path).
    pub residual: f64,
}

impl ComposedOperatorG {
    pub fn new(b: ComposedOperatorB, c: RealMat) -> Result<Self> {
        ensure_dim("output map C rows", b.dim(), c.nrows())?;
        let c_is_identity = linalg::is_identity(&c);
        let cct_norm = linalg::spectral_norm(&(&c * c.transpose()));
        Ok(ComposedOperatorG {
            b,
            c,
            c_is_identity,
            cct_norm,
        })
    }

    pub fn b(&self) -> &ComposedOperatorB {
        &self.b
    }

    pub fn c(&self) -> &RealMat {
        &self.c
    }

    pub fn dim(&self) -> usize {
        self.c.ncols()
    }

    /// `J_{gamma G}(w)`: the `y` with `0 ∈ y - w + gamma C^T B(Cy)`.
    ///
    /// For `C = I` this is the resolvent of `B`. Otherwise the dual
    /// inclusion `0 ∈ B^{-1}(v) + gamma C C^T v - Cw` is solved by
    /// forward-backward with step `1 / (gamma ||C C^T||)` and
    /// `y = w - gamma C^T v`.
    pub fn resolvent(&self, gamma: f64, w: &RealVec, budget: InnerBudget) -> Result<GResolvent> {
        ensure_positive("gamma", gamma)?;
        ensure_dim("G resolvent argument", self.dim(), w.len())?;
        if self.c_is_identity {
            let parts = self.b.resolvent_parts(gamma, w, budget)?;
            return Ok(GResolvent {
                point: parts.point,
                multiplier: parts.multiplier,
                iterations: 0,
                residual: 0.0,
            });
        }
        if self.cct_norm == 0.0 {
            let multiplier = self.b.evaluate(&RealVec::zeros(self.b.dim()), budget)?;
            return Ok(GResolvent {
                point: w.clone(),
                multiplier,
                iterations: 0,
                residual: 0.0,
            });
        }
        let sigma = 1.0 / (gamma * self.cct_norm);
        let ct = self.c.transpose();
        let cw = &self.c * w;
        let mut v = RealVec::zeros(self.b.dim());
        let mut residual = f64::INFINITY;
        let mut point = w.clone();
        for k in 0..budget.max_iter {
            let u = &v - (&self.c * (&ct * &v) * gamma - &cw) * sigma;
            let (next, p) = self.b.inverse_resolvent(sigma, &u, budget)?;
            point = w - &ct * &next * gamma;
            // next ∈ B(p); the pair certifies y once p ≈ Cy.
            residual = (p - &self.c * &point).norm();
            v = next;
            if residual <= budget.tol {
                return Ok(GResolvent {
                    point,
                    multiplier: v,
                    iterations: k + 1,
                    residual,
                });
            }
            if !linalg::all_finite(&v) {
                break;
            }
        }
        Err(LureError::NotConverged {
            what: "dual resolvent loop for C^T B C",
            iterations: budget.max_iter,
            residual,
            best: point,
        })
    }

    /// Residual of `0 ∈ y - w + gamma C^T B(Cy)` for a candidate `(y, v)`.
    pub fn resolvent_residual(
        &self,
        gamma: f64,
        w: &RealVec,
        y: &RealVec,
        v: &RealVec,
    ) -> Result<f64> {
        let eq = (y - w + self.c.transpose() * v * gamma).norm();
        Ok(eq + self.b.membership_residual(&(&self.c * y), v)?)
    }
}

/// Coercivity of `D` on `rge(D + D^T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SemiCoercivityData {
    /// Smallest eigenvalue of `(D + D^T)/2` above [`EIG_ZERO`]; infinite
    /// when the symmetric part vanishes.
    pub c: f64,
    /// Orthonormal basis of `rge(D + D^T)` as columns.
    pub range_basis: RealMat,
}

impl SemiCoercivityData {
    /// `None` when `D` is not monotone.
    pub fn from_matrix(d: &RealMat) -> Option<Self> {
        let (values, vectors) = linalg::sym_eigen(d);
        let scale = linalg::spectral_norm(d).max(1.0);
        if values.iter().any(|l| *l < -1e-12 * scale) {
            return None;
        }
        let positive: Vec<usize> = (0..values.len())
            .filter(|&i| values[i] > EIG_ZERO)
            .collect();
        let c = positive
            .iter()
            .map(|&i| values[i])
            .fold(f64::INFINITY, f64::min);
        let mut range_basis = RealMat::zeros(d.nrows(), positive.len());
        for (k, &i) in positive.iter().enumerate() {
            range_basis.set_column(k, &vectors.column(i));
        }
        Some(SemiCoercivityData { c, range_basis })
    }
}

/// `L_g = ||P|| L_f + ||C|| ||PB - C^T|| / c`.
pub fn passive_forward_lipschitz(system: &LureSystem, semico: &SemiCoercivityData) -> Result<f64> {
    if !(semico.c > 0.0) {
        return Err(LureError::NonPositive {
            name: "semi-coercivity constant",
            value: semico.c,
        });
    }
    let p = system.certificate();
    let gap = linalg::spectral_norm(&system.pb_minus_ct());
    let coupling = if gap <= 1e-14 {
        0.0
    } else if semico.c.is_infinite() {
        return Err(LureError::InvalidSystem(
            "PB - C^T is nonzero while D + D^T vanishes; the system is not passive".into(),
        ));
    } else {
        linalg::spectral_norm(system.c()) * gap / semico.c
    };
    Ok(linalg::spectral_norm(&p) * system.f().lipschitz() + coupling)
}

/// `g(x) = Pf(x) + (PB - C^T) v` for any `v ∈ B(Cx)`.
pub fn passive_forward_eval(
    system: &LureSystem,
    x: &RealVec,
    budget: InnerBudget,
) -> Result<RealVec> {
    ensure_dim("forward part argument", system.state_dim(), x.len())?;
    let pf = system.certificate() * system.f().try_eval(x)?;
    let gap = system.pb_minus_ct();
    if gap.iter().all(|v| v.abs() <= 1e-15) {
        return Ok(pf);
    }
    let v = system.composed_b()?.evaluate(&(system.c() * x), budget)?;
    Ok(pf + gap * v)
}

/// Output of a resolvent step of `H = g + G`.
#[derive(Debug, Clone, PartialEq)]
pub struct HResolvent {
    pub point: RealVec,
    /// `v ∈ B(C * point)` from the last inner resolvent of `G`.
    pub multiplier: RealVec,
    /// `||y - J_{gamma G}(x - gamma g(y))||` evaluated at the returned point.
    pub fixed_point_residual: f64,
    pub iterations: usize,
}

/// `J_{gamma H}` by Banach iteration of `y -> J_{gamma G}(x - gamma g(y))`,
/// a contraction with factor `gamma L_g < 1`.
pub struct PassiveResolvent<'a> {
    system: &'a LureSystem,
    g: ComposedOperatorG,
    lipschitz: f64,
    budget: InnerBudget,
}

impl<'a> PassiveResolvent<'a> {
    pub fn new(system: &'a LureSystem, budget: InnerBudget) -> Result<Self> {
        let semico = SemiCoercivityData::from_matrix(system.d())
            .ok_or_else(|| LureError::InvalidSystem("D is not semi-coercive".into()))?;
        let lipschitz = passive_forward_lipschitz(system, &semico)?;
        Ok(PassiveResolvent {
            system,
            g: system.composed_g()?,
            lipschitz,
            budget,
        })
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn resolvent(&self, gamma: f64, x: &RealVec) -> Result<HResolvent> {
        ensure_positive("gamma", gamma)?;
        ensure_dim("H resolvent argument", self.system.state_dim(), x.len())?;
        if gamma * self.lipschitz >= 1.0 {
            return Err(LureError::StepTooLarge {
                gamma,
                lipschitz: self.lipschitz,
            });
        }
        let step = |y: &RealVec| -> Result<GResolvent> {
            let g = passive_forward_eval(self.system, y, self.budget)?;
            self.g.resolvent(gamma, &(x - g * gamma), self.budget)
        };
        let mut y = x.clone();
        let mut delta = f64::INFINITY;
        for k in 0..self.budget.max_iter {
            let next = step(&y)?;
            delta = (&next.point - &y).norm();
            y = next.point;
            if delta <= self.budget.tol {
                let check = step(&y)?;
                return Ok(HResolvent {
                    fixed_point_residual: (&check.point - &y).norm(),
                    point: y,
                    multiplier: next.multiplier,
                    iterations: k + 1,
                });
            }
        }
        Err(LureError::NotConverged {
            what: "fixed-point iteration for the resolvent of H",
            iterations: self.budget.max_iter,
            residual: delta,
            best: y,
        })
    }
}

/// Convenience wrapper around [`PassiveResolvent`].
pub fn passive_resolvent(
    system: &LureSystem,
    gamma: f64,
    x: &RealVec,
    budget: InnerBudget,
) -> Result<HResolvent> {
    PassiveResolvent::new(system, budget)?.resolvent(gamma, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag, matrix, vector};
    use crate::ops::LipschitzMap;

    fn budget() -> InnerBudget {
        InnerBudget::default()
    }

    #[test]
    fn composed_resolvent_example() {
        let b =
            ComposedOperatorB::new(MonotoneOperator::sign(2).unwrap(), diag(&[0.0, 1.0])).unwrap();
        let parts = b
            .resolvent_parts(0.5, &vector(&[-2.5, -6.5]), budget())
            .unwrap();
        assert!((parts.point - vector(&[-2.0, -6.0])).norm() < 1e-14);
        assert!((parts.multiplier - vector(&[-1.0, -1.0])).norm() < 1e-14);
    }

    #[test]
    fn composed_resolvent_without_feedthrough_is_plain() {
        let op = MonotoneOperator::normal_cone_ball(vector(&[0.0, 0.0]), 1.0).unwrap();
        let b = ComposedOperatorB::new(op.clone(), RealMat::zeros(2, 2)).unwrap();
        let x = vector(&[3.0, 4.0]);
        assert_eq!(
            b.resolvent(0.7, &x, budget()).unwrap(),
            op.resolvent(0.7, &x).unwrap()
        );
    }

    #[test]
    fn composed_resolvent_identity_feedback() {
        // B = (id + id)^{-1} = id / 2, so J_B(x) = x / 1.5.
        let b =
            ComposedOperatorB::new(MonotoneOperator::identity(1).unwrap(), diag(&[1.0])).unwrap();
        let y = b.resolvent(1.0, &vector(&[3.0]), budget()).unwrap();
        assert!((y[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn non_monotone_feedthrough_rejected() {
        assert!(ComposedOperatorB::new(MonotoneOperator::sign(1).unwrap(), diag(&[-1.0])).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let b = ComposedOperatorB::new(MonotoneOperator::sign(1).unwrap(), diag(&[0.0])).unwrap();
        assert_eq!(b.evaluate(&vector(&[0.5]), budget()).unwrap()[0], 1.0);

        let b =
            ComposedOperatorB::new(MonotoneOperator::sign(2).unwrap(), diag(&[0.0, 1.0])).unwrap();
        let c = vector(&[-2.0, -6.0]);
        let v = b.evaluate(&c, budget()).unwrap();
        assert!(b.membership_residual(&c, &v).unwrap() < 1e-12);
        assert_eq!(v, vector(&[-1.0, -1.0]));

        let b =
            ComposedOperatorB::new(MonotoneOperator::identity(1).unwrap(), diag(&[3.0])).unwrap();
        assert!((b.evaluate(&vector(&[8.0]), budget()).unwrap()[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn evaluate_general_feedthrough_by_splitting() {
        let op = MonotoneOperator::sign(2).unwrap();
        let d = matrix(2, 2, &[1.0, 0.5, -0.5, 0.0]);
        let b = ComposedOperatorB::new(op, d).unwrap();
        let c = vector(&[2.0, -0.3]);
        let v = b.evaluate(&c, budget()).unwrap();
        assert!(b.membership_residual(&c, &v).unwrap() < 1e-9);
    }

    #[test]
    fn evaluate_outside_range() {
        let op = MonotoneOperator::normal_cone_box(vec![-1.0], vec![1.0]).unwrap();
        let b = ComposedOperatorB::new(op, diag(&[0.0])).unwrap();
        assert!(matches!(
            b.evaluate(&vector(&[2.0]), budget()),
            Err(LureError::OutsideDomain { .. })
        ));
    }

    #[test]
    fn g_resolvent_scalar_dual_path() {
        let b =
            ComposedOperatorB::new(MonotoneOperator::identity(1).unwrap(), diag(&[0.0])).unwrap();
        let g = ComposedOperatorG::new(b, matrix(1, 1, &[2.0])).unwrap();
        let r = g.resolvent(1.0, &vector(&[5.0]), budget()).unwrap();
        assert!((r.point[0] - 1.0).abs() < 1e-9);
        assert!((r.multiplier[0] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn g_resolvent_zero_output_map() {
        let b = ComposedOperatorB::new(MonotoneOperator::sign(1).unwrap(), diag(&[0.0])).unwrap();
        let g = ComposedOperatorG::new(b, RealMat::zeros(1, 2)).unwrap();
        let w = vector(&[1.0, -7.0]);
        assert_eq!(g.resolvent(0.3, &w, budget()).unwrap().point, w);
    }

    #[test]
    fn g_resolvent_rectangular_output_map_certifies() {
        let b = ComposedOperatorB::new(MonotoneOperator::sign(3).unwrap(), diag(&[0.0, 0.5, 2.0]))
            .unwrap();
        let c = matrix(3, 2, &[1.0, 2.0, -1.0, 0.5, 0.3, 0.0]);
        let g = ComposedOperatorG::new(b, c).unwrap();
        let w = vector(&[2.0, -1.0]);
        let r = g.resolvent(0.5, &w, budget()).unwrap();
        assert!(
            g.resolvent_residual(0.5, &w, &r.point, &r.multiplier)
                .unwrap()
                < 1e-8
        );
    }

    #[test]
    fn semicoercivity_constant() {
        let s = SemiCoercivityData::from_matrix(&diag(&[0.0, 1.0])).unwrap();
        assert_eq!(s.c, 1.0);
        assert_eq!(s.range_basis.ncols(), 1);
        let skew = matrix(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let s = SemiCoercivityData::from_matrix(&skew).unwrap();
        assert!(s.c.is_infinite());
        assert!(SemiCoercivityData::from_matrix(&diag(&[-1.0])).is_none());
    }

    fn scalar_system(f: LipschitzMap, b: f64, c: f64, d: f64, op: MonotoneOperator) -> LureSystem {
        LureSystem::new(
            f,
            matrix(1, 1, &[b]),
            matrix(1, 1, &[c]),
            matrix(1, 1, &[d]),
            op,
        )
        .unwrap()
    }

    #[test]
    fn forward_part_lipschitz_direct_formula() {
        let sys = scalar_system(
            LipschitzMap::identity(1),
            2.0,
            1.0,
            1.0,
            MonotoneOperator::identity(1).unwrap(),
        );
        let semico = SemiCoercivityData::from_matrix(sys.d()).unwrap();
        assert!((passive_forward_lipschitz(&sys, &semico).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn forward_part_eval_examples() {
        let sys = scalar_system(
            LipschitzMap::zero(1),
            2.0,
            1.0,
            0.0,
            MonotoneOperator::identity(1).unwrap(),
        );
        let g = passive_forward_eval(&sys, &vector(&[3.0]), budget()).unwrap();
        assert!((g[0] - 3.0).abs() < 1e-14);

        let sys = scalar_system(
            LipschitzMap::identity(1),
            1.0,
            1.0,
            0.0,
            MonotoneOperator::sign(1).unwrap(),
        );
        assert_eq!(
            passive_forward_eval(&sys, &vector(&[-4.0]), budget()).unwrap()[0],
            -4.0
        );
    }

    #[test]
    fn passive_resolvent_examples() {
        let sys = scalar_system(
            LipschitzMap::identity(1),
            1.0,
            1.0,
            0.0,
            MonotoneOperator::zero(1).unwrap(),
        );
        let r = passive_resolvent(&sys, 0.5, &vector(&[3.0]), budget()).unwrap();
        assert!((r.point[0] - 2.0).abs() < 1e-9);
        assert!(r.fixed_point_residual <= 1e-10);

        let sys = scalar_system(
            LipschitzMap::identity(1),
            1.0,
            1.0,
            0.0,
            MonotoneOperator::zero(1).unwrap(),
        );
        assert!(matches!(
            passive_resolvent(&sys, 1.5, &vector(&[3.0]), budget()),
            Err(LureError::StepTooLarge { .. })
        ));
    }
}
