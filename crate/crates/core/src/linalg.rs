//! Small dense linear-algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};

pub type RealVec = DVector<f64>;
pub type RealMat = DMatrix<f64>;

/// Eigenvalue threshold below which a symmetric eigenvalue counts as zero.
pub const EIG_ZERO: f64 = 1e-10;

pub fn vector(entries: &[f64]) -> RealVec {
    RealVec::from_column_slice(entries)
}

/// Builds a matrix from row-major entries.
pub fn matrix(rows: usize, cols: usize, row_major: &[f64]) -> RealMat {
    RealMat::from_row_slice(rows, cols, row_major)
}

pub fn diag(entries: &[f64]) -> RealMat {
    RealMat::from_diagonal(&vector(entries))
}

pub fn sym_part(m: &RealMat) -> RealMat {
    (m + m.transpose()) * 0.5
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn sym_eigenvalues(m: &RealMat) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

pub fn min_sym_eigenvalue(m: &RealMat) -> f64 {
    sym_eigenvalues(&sym_part(m))
        .first()
        .copied()
        .unwrap_or(0.0)
}

/// Largest singular value.
pub fn spectral_norm(m: &RealMat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .fold(0.0_f64, |acc, s| acc.max(*s))
}

pub fn is_diagonal(m: &RealMat) -> bool {
    m.is_square()
        && m.iter()
            .enumerate()
            .all(|(k, v)| k % m.nrows() == k / m.nrows() || *v == 0.0)
}

/// Returns `s` when `m == s * I`.
pub fn scalar_multiple_of_identity(m: &RealMat) -> Option<f64> {
    if !is_diagonal(m) || m.nrows() == 0 {
        return None;
    }
    let s = m[(0, 0)];
    m.diagonal().iter().all(|d| *d == s).then_some(s)
}

pub fn is_identity(m: &RealMat) -> bool {
    m.is_square() && scalar_multiple_of_identity(m) == Some(1.0)
}

pub fn solve(m: &RealMat, rhs: &RealVec) -> Option<RealVec> {
    m.clone().lu().solve(rhs)
}

pub fn inverse(m: &RealMat) -> Option<RealMat> {
    m.clone().try_inverse()
}

pub fn all_finite(v: &RealVec) -> bool {
    v.iter().all(|x| x.is_finite())
}

/// Symmetric eigen-decomposition returning (eigenvalues, eigenvectors as columns).
pub fn sym_eigen(m: &RealMat) -> (Vec<f64>, RealMat) {
    let eig = sym_part(m).symmetric_eigen();
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectral_norm_of_example_matrix() {
        let a = matrix(2, 2, &[9.0, -1.0, 1.0, 8.0]);
        // A^T A = [[82, -1], [-1, 65]]
        let expected = ((147.0 + (17.0_f64 * 17.0 + 4.0).sqrt()) / 2.0).sqrt();
        assert!((spectral_norm(&a) - expected).abs() < 1e-12);
        assert!((spectral_norm(&a) - 9.06).abs() < 5e-3);
    }

    #[test]
    fn diagonal_detection() {
        assert!(is_diagonal(&diag(&[1.0, 0.0, 3.0])));
        assert!(!is_diagonal(&matrix(2, 2, &[1.0, 1e-20, 0.0, 1.0])));
        assert_eq!(scalar_multiple_of_identity(&diag(&[2.0, 2.0])), Some(2.0));
        assert_eq!(scalar_multiple_of_identity(&diag(&[2.0, 1.0])), None);
        assert!(is_identity(&RealMat::identity(3, 3)));
    }

    #[test]
    fn eigenvalues_sorted() {
        let ev = sym_eigenvalues(&diag(&[3.0, -1.0, 2.0]));
        assert_eq!(ev, vec![-1.0, 2.0, 3.0]);
    }
}
