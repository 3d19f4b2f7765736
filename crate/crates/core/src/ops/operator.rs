//! Catalog of maximal monotone operators with closed-form resolvents and
//! exact membership distances.

use crate::error::{ensure_dim, ensure_positive, LureError, Result};
use crate::linalg::{self, RealMat, RealVec};

/// Kinds of maximal monotone operators the crate knows how to resolve
/// and certify exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorKind {
    /// Componentwise set-valued sign, `Sign(0) = [-1, 1]`.
    Sign,
    /// Subdifferential of the weighted l1 norm `sum_i w_i |x_i|`.
    L1 { weights: Vec<f64> },
    /// Normal cone of the box `[lo, hi]` (bounds may be infinite).
    NormalConeBox { lo: Vec<f64>, hi: Vec<f64> },
    /// Normal cone of the closed Euclidean ball.
    NormalConeBall { center: RealVec, radius: f64 },
    /// Normal cone of the nonnegative orthant.
    NormalConeNonnegOrthant,
    /// `F(x) = {0}`.
    Zero,
    /// `F(x) = {Mx}` with `M + M^T` positive semidefinite.
    LinearMonotone { matrix: RealMat },
    /// `F(x) = {x}`.
    Identity,
    /// Block-diagonal stacking: `F(x) = F_1(x^1) x ... x F_k(x^k)`.
    Product(Vec<MonotoneOperator>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneOperator {
    dim: usize,
    kind: OperatorKind,
}

fn soft_threshold(x: f64, t: f64) -> f64 {
    if x > t {
        x - t
    } else if x < -t {
        x + t
    } else {
        0.0
    }
}

/// Distance from `v` to the subdifferential of `w|.|` at `x`.
fn abs_subdiff_distance(x: f64, v: f64, w: f64) -> f64 {
    if x > 0.0 {
        (v - w).abs()
    } else if x < 0.0 {
        (v + w).abs()
    } else {
        (v.abs() - w).max(0.0)
    }
}

impl MonotoneOperator {
    fn new_unchecked(dim: usize, kind: OperatorKind) -> Self {
        MonotoneOperator { dim, kind }
    }

    fn check_dim(dim: usize) -> Result<()> {
        if dim == 0 {
            Err(LureError::InvalidParameter(
                "operator dimension must be positive".into(),
            ))
        } else {
            Ok(())
        }
    }

    pub fn sign(dim: usize) -> Result<Self> {
        Self::check_dim(dim)?;
        Ok(Self::new_unchecked(dim, OperatorKind::Sign))
    }

    pub fn l1(dim: usize, weight: f64) -> Result<Self> {
        Self::l1_weighted(vec![weight; dim])
    }

    pub fn l1_weighted(weights: Vec<f64>) -> Result<Self> {
        Self::check_dim(weights.len())?;
        for w in &weights {
            ensure_positive("l1 weight", *w)?;
        }
        Ok(Self::new_unchecked(
            weights.len(),
            OperatorKind::L1 { weights },
        ))
    }

    pub fn normal_cone_box(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        Self::check_dim(lo.len())?;
        ensure_dim("box bounds", lo.len(), hi.len())?;
        for (l, h) in lo.iter().zip(&hi) {
            if l.is_nan() || h.is_nan() || l > h || *l == f64::INFINITY || *h == f64::NEG_INFINITY {
                return Err(LureError::InvalidParameter(format!(
                    "box bounds must satisfy lo <= hi, got [{l}, {h}]"
                )));
            }
        }
        Ok(Self::new_unchecked(
            lo.len(),
            OperatorKind::NormalConeBox { lo, hi },
        ))
    }

    pub fn normal_cone_ball(center: RealVec, radius: f64) -> Result<Self> {
        Self::check_dim(center.len())?;
        ensure_positive("ball radius", radius)?;
        if !linalg::all_finite(&center) {
            return Err(LureError::NonFinite("ball center"));
        }
        Ok(Self::new_unchecked(
            center.len(),
            OperatorKind::NormalConeBall { center, radius },
        ))
    }

    pub fn normal_cone_nonneg_orthant(dim: usize) -> Result<Self> {
        Self::check_dim(dim)?;
        Ok(Self::new_unchecked(
            dim,
            OperatorKind::NormalConeNonnegOrthant,
        ))
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Self::check_dim(dim)?;
        Ok(Self::new_unchecked(dim, OperatorKind::Zero))
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::check_dim(dim)?;
        Ok(Self::new_unchecked(dim, OperatorKind::Identity))
    }

    /// Linear operator `x -> Mx`; rejected unless `M + M^T` is PSD.
    pub fn linear_monotone(matrix: RealMat) -> Result<Self> {
        if !matrix.is_square() {
            return Err(LureError::dim(
                "linear operator",
                matrix.nrows(),
                matrix.ncols(),
            ));
        }
        Self::check_dim(matrix.nrows())?;
        let min_eig = linalg::min_sym_eigenvalue(&matrix);
        let scale = linalg::spectral_norm(&matrix).max(1.0);
        if min_eig < -1e-12 * scale {
            return Err(LureError::NotMonotone(format!(
                "symmetric part has eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self::new_unchecked(
            matrix.nrows(),
            OperatorKind::LinearMonotone { matrix },
        ))
    }

    pub fn product(blocks: Vec<MonotoneOperator>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(LureError::InvalidParameter("empty operator product".into()));
        }
        let dim = blocks.iter().map(|b| b.dim).sum();
        Ok(Self::new_unchecked(dim, OperatorKind::Product(blocks)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &OperatorKind {
        &self.kind
    }

    /// Normal cones of closed convex sets (and products of them).
    pub fn is_normal_cone(&self) -> bool {
        match &self.kind {
            OperatorKind::NormalConeBox { .. }
            | OperatorKind::NormalConeBall { .. }
            | OperatorKind::NormalConeNonnegOrthant => true,
            OperatorKind::Product(blocks) => blocks.iter().all(|b| b.is_normal_cone()),
            _ => false,
        }
    }

    /// True when `dom F` is the whole space.
    pub fn has_full_domain(&self) -> bool {
        match &self.kind {
            OperatorKind::NormalConeBox { lo, hi } => lo.iter().chain(hi).all(|b| b.is_infinite()),
            OperatorKind::NormalConeBall { .. } | OperatorKind::NormalConeNonnegOrthant => false,
            OperatorKind::Product(blocks) => blocks.iter().all(|b| b.has_full_domain()),
            _ => true,
        }
    }

    /// Matrix `M` when `F(x) = {Mx}`.
    pub fn linear_matrix(&self) -> Option<RealMat> {
        match &self.kind {
            OperatorKind::Zero => Some(RealMat::zeros(self.dim, self.dim)),
            OperatorKind::Identity => Some(RealMat::identity(self.dim, self.dim)),
            OperatorKind::LinearMonotone { matrix } => Some(matrix.clone()),
            OperatorKind::Product(blocks) => {
                let mut m = RealMat::zeros(self.dim, self.dim);
                let mut off = 0;
                for b in blocks {
                    let bm = b.linear_matrix()?;
                    m.view_mut((off, off), (b.dim, b.dim)).copy_from(&bm);
                    off += b.dim;
                }
                Some(m)
            }
            _ => None,
        }
    }

    /// Splits a coordinate-separable operator into its one-dimensional factors.
    pub fn componentwise_parts(&self) -> Option<Vec<MonotoneOperator>> {
        let one = |kind| MonotoneOperator::new_unchecked(1, kind);
        match &self.kind {
            OperatorKind::Sign => Some(vec![one(OperatorKind::Sign); self.dim]),
            OperatorKind::L1 { weights } => Some(
                weights
                    .iter()
                    .map(|w| one(OperatorKind::L1 { weights: vec![*w] }))
                    .collect(),
            ),
            OperatorKind::NormalConeBox { lo, hi } => Some(
                lo.iter()
                    .zip(hi)
                    .map(|(l, h)| {
                        one(OperatorKind::NormalConeBox {
                            lo: vec![*l],
                            hi: vec![*h],
                        })
                    })
                    .collect(),
            ),
            OperatorKind::NormalConeNonnegOrthant => {
                Some(vec![one(OperatorKind::NormalConeNonnegOrthant); self.dim])
            }
            OperatorKind::Zero => Some(vec![one(OperatorKind::Zero); self.dim]),
            OperatorKind::Identity => Some(vec![one(OperatorKind::Identity); self.dim]),
            OperatorKind::LinearMonotone { matrix } => linalg::is_diagonal(matrix).then(|| {
                matrix
                    .diagonal()
                    .iter()
                    .map(|m| {
                        one(OperatorKind::LinearMonotone {
                            matrix: RealMat::from_element(1, 1, *m),
                        })
                    })
                    .collect()
            }),
            OperatorKind::NormalConeBall { center, radius } => (self.dim == 1).then(|| {
                vec![one(OperatorKind::NormalConeBox {
                    lo: vec![center[0] - radius],
                    hi: vec![center[0] + radius],
                })]
            }),
            OperatorKind::Product(blocks) => {
                let mut parts = Vec::with_capacity(self.dim);
                for b in blocks {
                    parts.extend(b.componentwise_parts()?);
                }
                Some(parts)
            }
        }
    }

    fn check_input(&self, x: &RealVec) -> Result<()> {
        ensure_dim("operator argument", self.dim, x.len())?;
        if !linalg::all_finite(x) {
            return Err(LureError::NonFinite("operator argument"));
        }
        Ok(())
    }

    /// `J_{gamma F}(x) = (I + gamma F)^{-1}(x)`.
    pub fn resolvent(&self, gamma: f64, x: &RealVec) -> Result<RealVec> {
        ensure_positive("gamma", gamma)?;
        self.check_input(x)?;
        Ok(self.resolvent_steps(&vec![gamma; self.dim], x))
    }

    /// `J_{gamma F^{-1}}(x) = x - gamma J_{F/gamma}(x/gamma)`.
    pub fn inverse_resolvent(&self, gamma: f64, x: &RealVec) -> Result<RealVec> {
        ensure_positive("gamma", gamma)?;
        self.check_input(x)?;
        let inner = self.resolvent_steps(&vec![1.0 / gamma; self.dim], &(x / gamma));
        Ok(x - inner * gamma)
    }

    /// Solves `z + S F(z) ∋ x` for the diagonal step matrix `S = diag(steps)`,
    /// `steps > 0`. With equal steps this is the plain resolvent.
    pub(crate) fn resolvent_steps(&self, steps: &[f64], x: &RealVec) -> RealVec {
        debug_assert_eq!(steps.len(), self.dim);
        match &self.kind {
            OperatorKind::Sign => RealVec::from_iterator(
                self.dim,
                (0..self.dim).map(|i| soft_threshold(x[i], steps[i])),
            ),
            OperatorKind::L1 { weights } => RealVec::from_iterator(
                self.dim,
                (0..self.dim).map(|i| soft_threshold(x[i], steps[i] * weights[i])),
            ),
            OperatorKind::NormalConeBox { lo, hi } => {
                RealVec::from_iterator(self.dim, (0..self.dim).map(|i| x[i].clamp(lo[i], hi[i])))
            }
            OperatorKind::NormalConeNonnegOrthant => x.map(|v| v.max(0.0)),
            OperatorKind::Zero => x.clone(),
            OperatorKind::Identity => {
                RealVec::from_iterator(self.dim, (0..self.dim).map(|i| x[i] / (1.0 + steps[i])))
            }
            OperatorKind::LinearMonotone { matrix } => {
                let mut sys = matrix.clone();
                for (i, mut row) in sys.row_iter_mut().enumerate() {
                    row *= steps[i];
                }
                sys += RealMat::identity(self.dim, self.dim);
                // I + S M is invertible: S^{-1} + M is positive definite.
                linalg::solve(&sys, x).expect("I + S M is nonsingular for monotone M")
            }
            OperatorKind::NormalConeBall { center, radius } => {
                weighted_ball_projection(center, *radius, steps, x)
            }
            OperatorKind::Product(blocks) => {
                let mut out = RealVec::zeros(self.dim);
                let mut off = 0;
                for b in blocks {
                    let xb = x.rows(off, b.dim).into_owned();
                    let yb = b.resolvent_steps(&steps[off..off + b.dim], &xb);
                    out.rows_mut(off, b.dim).copy_from(&yb);
                    off += b.dim;
                }
                out
            }
        }
    }

    /// Euclidean projection onto `dom F` (identity for full-domain kinds).
    pub fn project_domain(&self, x: &RealVec) -> RealVec {
        match &self.kind {
            OperatorKind::NormalConeBox { .. }
            | OperatorKind::NormalConeBall { .. }
            | OperatorKind::NormalConeNonnegOrthant => {
                self.resolvent_steps(&vec![1.0; self.dim], x)
            }
            OperatorKind::Product(blocks) => {
                let mut out = x.clone();
                let mut off = 0;
                for b in blocks {
                    let xb = x.rows(off, b.dim).into_owned();
                    out.rows_mut(off, b.dim).copy_from(&b.project_domain(&xb));
                    off += b.dim;
                }
                out
            }
            _ => x.clone(),
        }
    }

    pub fn domain_distance(&self, x: &RealVec) -> f64 {
        (x - self.project_domain(x)).norm()
    }

    /// Distance from `v` to the set `F(x)`. Points outside `dom F` yield
    /// [`LureError::OutsideDomain`] carrying `d(x, dom F)`.
    pub fn member_residual(&self, x: &RealVec, v: &RealVec) -> Result<f64> {
        self.check_input(x)?;
        ensure_dim("membership value", self.dim, v.len())?;
        let dd = self.domain_distance(x);
        if dd > 0.0 {
            return Err(LureError::OutsideDomain { distance: dd });
        }
        Ok(self.member_residual_sq(x, v).sqrt())
    }

    fn member_residual_sq(&self, x: &RealVec, v: &RealVec) -> f64 {
        match &self.kind {
            OperatorKind::Sign => (0..self.dim)
                .map(|i| abs_subdiff_distance(x[i], v[i], 1.0).powi(2))
                .sum(),
            OperatorKind::L1 { weights } => (0..self.dim)
                .map(|i| abs_subdiff_distance(x[i], v[i], weights[i]).powi(2))
                .sum(),
            OperatorKind::NormalConeBox { lo, hi } => (0..self.dim)
                .map(|i| {
                    let at_lo = x[i] <= lo[i];
                    let at_hi = x[i] >= hi[i];
                    let d = match (at_lo, at_hi) {
                        (true, true) => 0.0,
                        (true, false) => v[i].max(0.0),
                        (false, true) => (-v[i]).max(0.0),
                        (false, false) => v[i].abs(),
                    };
                    d * d
                })
                .sum(),
            OperatorKind::NormalConeNonnegOrthant => (0..self.dim)
                .map(|i| {
                    let d = if x[i] <= 0.0 {
                        v[i].max(0.0)
                    } else {
                        v[i].abs()
                    };
                    d * d
                })
                .sum(),
            OperatorKind::NormalConeBall { center, radius } => {
                let offset = x - center;
                let r = offset.norm();
                if r < *radius {
                    v.norm_squared()
                } else {
                    let u = offset / r;
                    let t = v.dot(&u).max(0.0);
                    (v - u * t).norm_squared()
                }
            }
            OperatorKind::Zero => v.norm_squared(),
            OperatorKind::Identity => (v - x).norm_squared(),
            OperatorKind::LinearMonotone { matrix } => (v - matrix * x).norm_squared(),
            OperatorKind::Product(blocks) => {
                let mut off = 0;
                let mut acc = 0.0;
                for b in blocks {
                    let xb = x.rows(off, b.dim).into_owned();
                    let vb = v.rows(off, b.dim).into_owned();
                    acc += b.member_residual_sq(&xb, &vb);
                    off += b.dim;
                }
                acc
            }
        }
    }

    /// Natural residual `||x - J_F(x + v)||`: zero exactly when `v ∈ F(x)`,
    /// Lipschitz in `(x, v)`, and defined everywhere. Used to certify iterates
    /// that only approximately reach kinks and boundaries.
    pub fn natural_residual(&self, x: &RealVec, v: &RealVec) -> Result<f64> {
        self.check_input(x)?;
        ensure_dim("membership value", self.dim, v.len())?;
        let s = x + v;
        Ok((x - self.resolvent_steps(&vec![1.0; self.dim], &s)).norm())
    }

    /// Minimal-norm element of `F(x)`, or `None` when `x ∉ dom F`.
    pub fn min_norm_selection(&self, x: &RealVec) -> Option<RealVec> {
        if self.domain_distance(x) > 0.0 {
            return None;
        }
        Some(match &self.kind {
            OperatorKind::Sign => x.map(|v| {
                if v > 0.0 {
                    1.0
                } else if v < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }),
            OperatorKind::L1 { weights } => RealVec::from_iterator(
                self.dim,
                (0..self.dim).map(|i| {
                    if x[i] > 0.0 {
                        weights[i]
                    } else if x[i] < 0.0 {
                        -weights[i]
                    } else {
                        0.0
                    }
                }),
            ),
            OperatorKind::NormalConeBox { .. }
            | OperatorKind::NormalConeBall { .. }
            | OperatorKind::NormalConeNonnegOrthant
            | OperatorKind::Zero => RealVec::zeros(self.dim),
            OperatorKind::Identity => x.clone(),
            OperatorKind::LinearMonotone { matrix } => matrix * x,
            OperatorKind::Product(blocks) => {
                let mut out = RealVec::zeros(self.dim);
                let mut off = 0;
                for b in blocks {
                    let xb = x.rows(off, b.dim).into_owned();
                    out.rows_mut(off, b.dim)
                        .copy_from(&b.min_norm_selection(&xb)?);
                    off += b.dim;
                }
                out
            }
        })
    }
}

/// Solves `z + S N_ball(z) ∋ x`: `z_i = (x_i + t s_i c_i) / (1 + t s_i)` with
/// the scalar multiplier `t >= 0` found by bisection on `||z(t) - c|| = r`.
fn weighted_ball_projection(center: &RealVec, radius: f64, steps: &[f64], x: &RealVec) -> RealVec {
    let offset = x - center;
    let dist = offset.norm();
    if dist <= radius {
        return x.clone();
    }
    if steps.iter().all(|s| *s == steps[0]) {
        return center + offset * (radius / dist);
    }
    let z_of = |t: f64| -> RealVec {
        RealVec::from_iterator(
            x.len(),
            (0..x.len()).map(|i| offset[i] / (1.0 + t * steps[i])),
        )
    };
    // ||z(t)|| <= dist / (1 + t min s) <= r at t_hi.
    let s_min = steps.iter().copied().fold(f64::INFINITY, f64::min);
    let mut lo = 0.0;
    let mut hi = (dist / radius - 1.0) / s_min;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if z_of(mid).norm() > radius {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let z = z_of(hi);
    let n = z.norm();
    let z = if n > radius { z * (radius / n) } else { z };
    center + z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vector;

    fn v1(x: f64) -> RealVec {
        vector(&[x])
    }

    #[test]
    fn sign_resolvent_is_soft_threshold() {
        let f = MonotoneOperator::sign(1).unwrap();
        let y = f.resolvent(0.5, &v1(1.2)).unwrap();
        assert!((y[0] - 0.7).abs() < 1e-15);
        assert_eq!(f.resolvent(0.5, &v1(0.3)).unwrap()[0], 0.0);
    }

    #[test]
    fn box_resolvent_is_projection_for_any_gamma() {
        let f = MonotoneOperator::normal_cone_box(vec![-1.0], vec![1.0]).unwrap();
        assert_eq!(f.resolvent(3.0, &v1(3.0)).unwrap()[0], 1.0);
        assert_eq!(f.resolvent(0.01, &v1(3.0)).unwrap()[0], 1.0);
    }

    #[test]
    fn zero_map_resolvent_is_identity() {
        let f = MonotoneOperator::zero(2).unwrap();
        let x = vector(&[4.0, -2.0]);
        assert_eq!(f.resolvent(1.0, &x).unwrap(), x);
    }

    #[test]
    fn inverse_resolvent_of_sign() {
        let f = MonotoneOperator::sign(1).unwrap();
        assert!((f.inverse_resolvent(1.0, &v1(2.0)).unwrap()[0] - 1.0).abs() < 1e-15);
        assert!((f.inverse_resolvent(1.0, &v1(0.5)).unwrap()[0] - 0.5).abs() < 1e-15);
        // J_{Sign/2}(2) = 1.5, so 4 - 2 * 1.5 = 1.
        assert!((f.inverse_resolvent(2.0, &v1(4.0)).unwrap()[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn member_residual_examples() {
        let f = MonotoneOperator::sign(1).unwrap();
        assert_eq!(f.member_residual(&v1(0.0), &v1(0.3)).unwrap(), 0.0);
        assert!((f.member_residual(&v1(2.0), &v1(0.9)).unwrap() - 0.1).abs() < 1e-15);
        let b = MonotoneOperator::normal_cone_box(vec![-1.0], vec![1.0]).unwrap();
        assert_eq!(b.member_residual(&v1(1.0), &v1(5.0)).unwrap(), 0.0);
        assert_eq!(b.member_residual(&v1(0.0), &v1(5.0)).unwrap(), 5.0);
        assert_eq!(b.member_residual(&v1(-1.0), &v1(5.0)).unwrap(), 5.0);
    }

    #[test]
    fn member_residual_outside_domain() {
        let b = MonotoneOperator::normal_cone_box(vec![-1.0], vec![1.0]).unwrap();
        match b.member_residual(&v1(3.0), &v1(0.0)) {
            Err(LureError::OutsideDomain { distance }) => assert!((distance - 2.0).abs() < 1e-15),
            other => panic!("expected domain violation, got {other:?}"),
        }
        let ball = MonotoneOperator::normal_cone_ball(vector(&[0.0, 0.0]), 1.0).unwrap();
        assert!(matches!(
            ball.member_residual(&vector(&[3.0, 4.0]), &vector(&[0.0, 0.0])),
            Err(LureError::OutsideDomain { .. })
        ));
    }

    #[test]
    fn ball_boundary_normal_ray() {
        let ball = MonotoneOperator::normal_cone_ball(vector(&[0.0, 0.0]), 1.0).unwrap();
        let x = vector(&[1.0, 0.0]);
        assert_eq!(ball.member_residual(&x, &vector(&[2.0, 0.0])).unwrap(), 0.0);
        assert!((ball.member_residual(&x, &vector(&[2.0, 1.0])).unwrap() - 1.0).abs() < 1e-15);
        assert!((ball.member_residual(&x, &vector(&[-3.0, 0.0])).unwrap() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(MonotoneOperator::normal_cone_box(vec![1.0], vec![0.0]).is_err());
        assert!(MonotoneOperator::normal_cone_ball(vector(&[0.0]), 0.0).is_err());
        assert!(MonotoneOperator::l1(2, -1.0).is_err());
        assert!(MonotoneOperator::linear_monotone(linalg::diag(&[1.0, -1.0])).is_err());
        let f = MonotoneOperator::sign(2).unwrap();
        assert!(f.resolvent(0.0, &vector(&[1.0, 1.0])).is_err());
        assert!(matches!(
            f.resolvent(1.0, &vector(&[1.0])),
            Err(LureError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn weighted_ball_resolvent_satisfies_inclusion() {
        let ball = MonotoneOperator::normal_cone_ball(vector(&[0.5, -0.5]), 1.0).unwrap();
        let steps = [0.3, 2.0];
        let x = vector(&[4.0, 3.0]);
        let z = ball.resolvent_steps(&steps, &x);
        // (x - z)_i / s_i must lie in N_ball(z).
        let v = RealVec::from_iterator(2, (0..2).map(|i| (x[i] - z[i]) / steps[i]));
        assert!(ball.natural_residual(&z, &v).unwrap() < 1e-12);
    }

    #[test]
    fn product_operator_splits_blocks() {
        let p = MonotoneOperator::product(vec![
            MonotoneOperator::sign(1).unwrap(),
            MonotoneOperator::normal_cone_box(vec![0.0], vec![2.0]).unwrap(),
        ])
        .unwrap();
        let y = p.resolvent(1.0, &vector(&[3.0, 3.0])).unwrap();
        assert_eq!(y, vector(&[2.0, 2.0]));
        assert!(!p.is_normal_cone());
        assert_eq!(p.componentwise_parts().unwrap().len(), 2);
    }

    #[test]
    fn min_norm_selection_is_classical_sign() {
        let f = MonotoneOperator::sign(3).unwrap();
        let s = f.min_norm_selection(&vector(&[2.0, 0.0, -1e-300])).unwrap();
        assert_eq!(s, vector(&[1.0, 0.0, -1.0]));
        let b = MonotoneOperator::normal_cone_nonneg_orthant(1).unwrap();
        assert!(b.min_norm_selection(&v1(-1.0)).is_none());
    }
}
