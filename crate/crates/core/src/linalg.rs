//! Small dense linear-algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector, SVD};

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

/// Threshold on singular values for numerical rank decisions.
pub const RANK_TOL: f64 = 1e-8;

/// Singular values of `a`, sorted in decreasing order.
pub fn singular_values(a: &Matrix) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = SVD::new(a.clone(), false, false).singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Number of singular values of `a` above `tol` (absolute).
pub fn rank(a: &Matrix, tol: f64) -> usize {
    singular_values(a).into_iter().filter(|&s| s > tol).count()
}

/// Orthonormal basis (as columns) of the column space of `a`.
///
/// Singular directions with singular value `<= tol` are dropped.
pub fn orthonormal_basis(a: &Matrix, tol: f64) -> Matrix {
    let rows = a.nrows();
    if a.ncols() == 0 || rows == 0 {
        return Matrix::zeros(rows, 0);
    }
    let svd = SVD::new(a.clone(), true, false);
    let u = svd.u.expect("left singular vectors requested");
    let cols: Vec<Vector> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > tol)
        .map(|(k, _)| u.column(k).into_owned())
        .collect();
    if cols.is_empty() {
        Matrix::zeros(rows, 0)
    } else {
        Matrix::from_columns(&cols)
    }
}

/// Orthonormal basis (as columns) of the null space `{x : a x = 0}`.
pub fn null_space(a: &Matrix, tol: f64) -> Matrix {
    let cols = a.ncols();
    if a.nrows() == 0 {
        return Matrix::identity(cols, cols);
    }
    // Pad to a square (or tall) matrix so that the SVD returns a full V.
    let rows = a.nrows().max(cols);
    let mut padded = Matrix::zeros(rows, cols);
    padded.view_mut((0, 0), (a.nrows(), cols)).copy_from(a);
    let svd = SVD::new(padded, false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let basis: Vec<Vector> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= tol)
        .map(|(k, _)| v_t.row(k).transpose())
        .collect();
    if basis.is_empty() {
        Matrix::zeros(cols, 0)
    } else {
        Matrix::from_columns(&basis)
    }
}

/// Orthogonal projection of `x` onto the column span of the orthonormal `basis`.
pub fn project(basis: &Matrix, x: &Vector) -> Vector {
    if basis.ncols() == 0 {
        return Vector::zeros(x.len());
    }
    basis * (basis.transpose() * x)
}

/// Component of `x` orthogonal to the column span of the orthonormal `basis`.
pub fn reject(basis: &Matrix, x: &Vector) -> Vector {
    x - project(basis, x)
}

/// Principal angles between the column spans of two orthonormal bases.
///
/// Returns `min(k₁, k₂)` angles in `[0, π/2]`, sorted ascending. Small
/// angles are taken from the sines (singular values of the rejection),
/// large ones from the cosines, which keeps both ends accurate.
pub fn principal_angles(a: &Matrix, b: &Matrix) -> Vec<f64> {
    let k = a.ncols().min(b.ncols());
    if k == 0 {
        return Vec::new();
    }
    // Put the smaller subspace first.
    let (small, large) = if a.ncols() <= b.ncols() { (a, b) } else { (b, a) };
    let mut cosines = singular_values(&(small.transpose() * large));
    cosines.truncate(k);
    let rejected = small - large * (large.transpose() * small);
    let mut sines = singular_values(&rejected);
    sines.sort_by(|x, y| x.total_cmp(y));
    sines.truncate(k);
    let mut angles: Vec<f64> = cosines
        .iter()
        .zip(sines.iter())
        .map(|(&c, &s)| {
            let c = c.clamp(0.0, 1.0);
            let s = s.clamp(0.0, 1.0);
            if s < std::f64::consts::FRAC_1_SQRT_2 {
                s.asin()
            } else {
                c.acos()
            }
        })
        .collect();
    angles.sort_by(|x, y| x.total_cmp(y));
    angles
}

pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_wide_matrix() {
        let a = Matrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let ns = null_space(&a, RANK_TOL);
        assert_eq!(ns.ncols(), 2);
        assert!((a * &ns).norm() < 1e-14);
        assert!((ns.transpose() * &ns - Matrix::identity(2, 2)).norm() < 1e-14);
    }

    #[test]
    fn principal_angles_of_planes() {
        let a = Matrix::from_column_slice(3, 1, &[1.0, 0.0, 0.0]);
        let theta: f64 = 0.3;
        let b = Matrix::from_column_slice(3, 1, &[theta.cos(), theta.sin(), 0.0]);
        let angles = principal_angles(&a, &b);
        assert!((angles[0] - theta).abs() < 1e-15);

        let tiny: f64 = 1e-9;
        let c = Matrix::from_column_slice(3, 1, &[tiny.cos(), tiny.sin(), 0.0]);
        assert!((principal_angles(&a, &c)[0] - tiny).abs() < 1e-20);
    }

    #[test]
    fn rank_and_basis() {
        let a = Matrix::from_row_slice(3, 2, &[1.0, 2.0, 2.0, 4.0, 0.0, 0.0]);
        assert_eq!(rank(&a, RANK_TOL), 1);
        let q = orthonormal_basis(&a, RANK_TOL);
        assert_eq!(q.ncols(), 1);
        let x = Vector::from_vec(vec![1.0, 2.0, 0.0]);
        assert!((project(&q, &x) - &x).norm() < 1e-14);
    }
}
