use crate::error::{ensure_dim, ensure_positive, LureError, Result};
use crate::linalg::{self, RealMat, RealVec};

use super::{InnerBudget, MonotoneOperator};

/// A square matrix `E` with `<Ex, x> >= c ||x||^2`, `c > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveDefiniteMap {
    matrix: RealMat,
    coercivity: f64,
    norm: f64,
}

impl PositiveDefiniteMap {
    /// Computes the coercivity constant as the smallest eigenvalue of the
    /// symmetric part and rejects matrices where it is not positive.
    pub fn new(matrix: RealMat) -> Result<Self> {
        if !matrix.is_square() {
            return Err(LureError::dim(
                "positive definite map",
                matrix.nrows(),
                matrix.ncols(),
            ));
        }
        let coercivity = linalg::min_sym_eigenvalue(&matrix);
        let norm = linalg::spectral_norm(&matrix);
        if !(coercivity > 1e-14 * norm.max(1e-300)) {
            return Err(LureError::NotPositiveDefinite {
                min_eigenvalue: coercivity,
            });
        }
        Ok(PositiveDefiniteMap {
            matrix,
            coercivity,
            norm,
        })
    }

    pub fn matrix(&self) -> &RealMat {
        &self.matrix
    }

    pub fn coercivity(&self) -> f64 {
        self.coercivity
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// `J^E_F(w) = (E + F)^{-1}(w)`: the unique `z` with `w - Ez ∈ F(z)`.
///
/// Closed forms are used when `F` is linear (one linear solve) or `E` is
/// diagonal (a per-coordinate or weighted-projection solve). Otherwise the
/// forward-backward iteration `z <- J_{sF}(z - s(Ez - w))` with
/// `s = c / ||E||^2` runs until the inclusion defect `||(E - I/s) dz||`
/// drops below `budget.tol`.
pub fn resolvent_wrt(
    op: &MonotoneOperator,
    e: &PositiveDefiniteMap,
    w: &RealVec,
    budget: InnerBudget,
) -> Result<RealVec> {
    ensure_dim("resolvent_wrt metric", op.dim(), e.dim())?;
    ensure_dim("resolvent_wrt argument", op.dim(), w.len())?;
    ensure_positive("inner tolerance", budget.tol)?;
    if !linalg::all_finite(w) {
        return Err(LureError::NonFinite("resolvent_wrt argument"));
    }
    let n = op.dim();
    let em = e.matrix();

    if let Some(m) = op.linear_matrix() {
        return linalg::solve(&(em + m), w).ok_or(LureError::Singular("E + M"));
    }

    if linalg::is_diagonal(em) {
        let diag = em.diagonal();
        let steps: Vec<f64> = diag.iter().map(|d| 1.0 / d).collect();
        let scaled = RealVec::from_iterator(n, (0..n).map(|i| w[i] / diag[i]));
        return Ok(op.resolvent_steps(&steps, &scaled));
    }

    let sigma = e.coercivity() / (e.norm() * e.norm());
    let shrink = em - RealMat::identity(n, n) / sigma;
    let steps = vec![sigma; n];
    let mut z = op.resolvent_steps(&steps, &(w * sigma));
    let mut residual = f64::INFINITY;
    for _ in 0..budget.max_iter {
        let forward = &z - (em * &z - w) * sigma;
        let next = op.resolvent_steps(&steps, &forward);
        residual = (&shrink * (&z - &next)).norm();
        z = next;
        if residual <= budget.tol {
            return Ok(z);
        }
    }
    Err(LureError::NotConverged {
        what: "resolvent with respect to E",
        iterations: budget.max_iter,
        residual,
        best: z,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag, matrix, vector};

    #[test]
    fn diagonal_metric_sign_example() {
        let f = MonotoneOperator::sign(2).unwrap();
        let e = PositiveDefiniteMap::new(diag(&[2.0, 2.0 / 3.0])).unwrap();
        let z = resolvent_wrt(
            &f,
            &e,
            &vector(&[-5.0, -13.0 / 3.0]),
            InnerBudget::default(),
        )
        .unwrap();
        assert!((z[0] + 2.0).abs() < 1e-14);
        assert!((z[1] + 5.0).abs() < 1e-14);
    }

    #[test]
    fn zero_operator_inverts_metric() {
        let f = MonotoneOperator::zero(2).unwrap();
        let em = matrix(2, 2, &[2.0, 0.5, -0.5, 1.0]);
        let e = PositiveDefiniteMap::new(em.clone()).unwrap();
        let w = vector(&[1.0, 3.0]);
        let z = resolvent_wrt(&f, &e, &w, InnerBudget::default()).unwrap();
        assert!((em * z - w).norm() < 1e-14);
    }

    #[test]
    fn identity_metric_matches_plain_resolvent() {
        let f = MonotoneOperator::normal_cone_ball(vector(&[0.0, 1.0]), 0.5).unwrap();
        let e = PositiveDefiniteMap::new(RealMat::identity(2, 2)).unwrap();
        let w = vector(&[2.0, -1.0]);
        assert_eq!(
            resolvent_wrt(&f, &e, &w, InnerBudget::default()).unwrap(),
            f.resolvent(1.0, &w).unwrap()
        );
    }

    #[test]
    fn iterative_path_certifies() {
        let f = MonotoneOperator::sign(2).unwrap();
        let em = matrix(2, 2, &[2.0, 0.7, 0.3, 1.0]);
        let e = PositiveDefiniteMap::new(em.clone()).unwrap();
        let w = vector(&[3.0, -0.2]);
        let z = resolvent_wrt(&f, &e, &w, InnerBudget::default()).unwrap();
        let v = &w - &em * &z;
        assert!(f.natural_residual(&z, &v).unwrap() < 1e-9);
    }

    #[test]
    fn not_positive_definite_rejected() {
        assert!(matches!(
            PositiveDefiniteMap::new(diag(&[1.0, 0.0])),
            Err(LureError::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn budget_exhaustion_reports_best_iterate() {
        let f = MonotoneOperator::sign(2).unwrap();
        let e = PositiveDefiniteMap::new(matrix(2, 2, &[5.0, 0.5, 0.0, 0.2])).unwrap();
        let budget = InnerBudget {
            tol: 1e-14,
            max_iter: 3,
        };
        match resolvent_wrt(&f, &e, &vector(&[10.0, 10.0]), budget) {
            Err(LureError::NotConverged {
                best, iterations, ..
            }) => {
                assert_eq!(iterations, 3);
                assert_eq!(best.len(), 2);
            }
            other => panic!("expected NotConverged, got {other:?}"),
        }
    }
}
