//! Dense real matrix primitives.
//!
//! Built on a one-sided Jacobi SVD and `nalgebra`'s symmetric
//! eigensolver. Rank decisions are always relative: a singular value counts
//! when it exceeds `rank_tol * sigma_max`, and `sigma_max == 0` means rank 0.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{FrameError, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Numerical thresholds shared by every computation in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Relative singular-value cutoff for rank decisions.
    pub rank_tol: f64,
    /// Absolute threshold a lower frame bound must exceed.
    pub frame_eps: f64,
    /// Residual allowed for orthonormality, symmetry and inclusion tests.
    pub orth_tol: f64,
    /// Largest `||I - psi||` still accepted as an exact dual.
    pub dual_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rank_tol: 1e-10,
            frame_eps: 1e-9,
            orth_tol: 1e-10,
            dual_tol: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(rank_tol: f64, frame_eps: f64, orth_tol: f64, dual_tol: f64) -> Result<Self> {
        let tol = Self {
            rank_tol,
            frame_eps,
            orth_tol,
            dual_tol,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("rank_tol", self.rank_tol),
            ("frame_eps", self.frame_eps),
            ("orth_tol", self.orth_tol),
            ("dual_tol", self.dual_tol),
        ] {
            if !(value > 0.0 && value < 1.0) {
                return Err(FrameError::InvalidTolerance { name, value });
            }
        }
        Ok(())
    }

    pub fn with_frame_eps(mut self, frame_eps: f64) -> Result<Self> {
        self.frame_eps = frame_eps;
        self.validate()?;
        Ok(self)
    }

    pub fn with_rank_tol(mut self, rank_tol: f64) -> Result<Self> {
        self.rank_tol = rank_tol;
        self.validate()?;
        Ok(self)
    }
}

pub fn ensure_finite(a: &Matrix) -> Result<()> {
    if a.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(FrameError::NonFinite)
    }
}

/// Thin SVD with singular values sorted in decreasing order.
///
/// Returns `(U, sigma, V)` where `U` is `rows x r`, `V` is `cols x r` and
/// `r = min(rows, cols)`. Both factors have orthonormal columns. Empty
/// matrices yield empty factors.
///
/// One-sided Jacobi rather than nalgebra's bidiagonal QR: the latter can
/// return factors that do not recompose rank-deficient input.
pub fn sorted_svd(a: &Matrix) -> (Matrix, Vec<f64>, Matrix) {
    let (rows, cols) = a.shape();
    if rows.min(cols) == 0 {
        return (Matrix::zeros(rows, 0), Vec::new(), Matrix::zeros(cols, 0));
    }
    if rows < cols {
        let (v, sigma, u) = sorted_svd(&a.transpose());
        return (u, sigma, v);
    }
    let (w, v) = jacobi_sweeps(a);

    let norms: Vec<f64> = w.column_iter().map(|c| c.norm()).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let smax = norms[order[0]];

    let mut u_sorted = Matrix::zeros(rows, cols);
    let mut v_sorted = Matrix::zeros(cols, cols);
    let mut sigma = Vec::with_capacity(cols);
    for (k, &i) in order.iter().enumerate() {
        let s = norms[i];
        // below this the column direction is roundoff and gets replaced
        if s > smax * f64::EPSILON * rows as f64 && s > 0.0 {
            u_sorted.set_column(k, &(w.column(i) / s));
        }
        v_sorted.set_column(k, &v.column(i));
        sigma.push(s);
    }
    complete_orthonormal(&mut u_sorted, &sigma, smax * f64::EPSILON * rows as f64);
    (u_sorted, sigma, v_sorted)
}

/// Hestenes rotations on a tall matrix until its columns are mutually
/// orthogonal. Returns the rotated columns and the accumulated rotation.
fn jacobi_sweeps(a: &Matrix) -> (Matrix, Matrix) {
    let n = a.ncols();
    let mut w = a.clone();
    let mut v = Matrix::identity(n, n);
    for _ in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dot(&w.column(q));
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_columns(&mut w, p, q, c, s);
                rotate_columns(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
    (w, v)
}

fn rotate_columns(m: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    for i in 0..m.nrows() {
        let x = m[(i, p)];
        let y = m[(i, q)];
        m[(i, p)] = c * x - s * y;
        m[(i, q)] = s * x + c * y;
    }
}

/// Fill the columns of `u` that belong to negligible singular values with
/// unit vectors orthogonal to everything already present.
fn complete_orthonormal(u: &mut Matrix, sigma: &[f64], cut: f64) {
    let rows = u.nrows();
    for k in 0..sigma.len() {
        if sigma[k] > cut && sigma[k] > 0.0 {
            continue;
        }
        // the coordinate vector with the largest residual keeps norm^2 >= 1/rows
        let mut best = Vector::zeros(rows);
        for i in 0..rows {
            let mut x = Vector::zeros(rows);
            x[i] = 1.0;
            // two passes of Gram-Schmidt against the columns filled so far
            for _ in 0..2 {
                for j in 0..sigma.len() {
                    if j != k {
                        let d = u.column(j).dot(&x);
                        x -= u.column(j) * d;
                    }
                }
            }
            if x.norm() > best.norm() {
                best = x;
            }
        }
        let norm = best.norm();
        u.set_column(k, &(best / norm));
    }
}

/// Singular values in decreasing order.
pub fn singular_values(a: &Matrix) -> Vec<f64> {
    if a.nrows().min(a.ncols()) == 0 {
        return Vec::new();
    }
    sorted_svd(a).1
}

fn rank_from_sorted(sigma: &[f64], tol: &Tolerance) -> usize {
    match sigma.first() {
        Some(&smax) if smax > 0.0 => {
            let cut = tol.rank_tol * smax;
            sigma.iter().take_while(|&&s| s > cut).count()
        }
        _ => 0,
    }
}

pub fn numerical_rank(a: &Matrix, tol: &Tolerance) -> usize {
    rank_from_sorted(&singular_values(a), tol)
}

/// Flip each column so that its largest-magnitude entry is positive.
fn normalize_signs(q: &mut Matrix) {
    for mut col in q.column_iter_mut() {
        let mut pivot = 0.0_f64;
        for &x in col.iter() {
            if x.abs() > pivot.abs() + 1e-12 {
                pivot = x;
            }
        }
        if pivot < 0.0 {
            col.neg_mut();
        }
    }
}

/// Orthonormal basis of the column space of `a`, ordered by decreasing
/// singular value. The column count is the numerical rank.
pub fn orthonormal_columns(a: &Matrix, tol: &Tolerance) -> Matrix {
    let (u, sigma, _) = sorted_svd(a);
    let rank = rank_from_sorted(&sigma, tol);
    let mut q = u.columns(0, rank).into_owned();
    normalize_signs(&mut q);
    q
}

/// Orthonormal basis of the orthogonal complement of the column space of `a`.
pub fn complement_columns(a: &Matrix, tol: &Tolerance) -> Matrix {
    let n = a.nrows();
    let q = orthonormal_columns(a, tol);
    if q.ncols() == n {
        return Matrix::zeros(n, 0);
    }
    let residual = Matrix::identity(n, n) - &q * q.transpose();
    let (u, sigma, _) = sorted_svd(&residual);
    // eigenvalues of a projector are 0 or 1, so an absolute cut at 1/2 is exact
    let keep = sigma.iter().take_while(|&&s| s > 0.5).count();
    let mut c = u.columns(0, keep).into_owned();
    normalize_signs(&mut c);
    c
}

/// Orthonormal basis of the null space of `a`.
pub fn null_space(a: &Matrix, tol: &Tolerance) -> Matrix {
    complement_columns(&a.transpose(), tol)
}

/// Moore-Penrose pseudoinverse with a relative singular-value cutoff.
pub fn pinv(a: &Matrix, tol: &Tolerance) -> Matrix {
    let (rows, cols) = a.shape();
    let (u, sigma, v) = sorted_svd(a);
    let rank = rank_from_sorted(&sigma, tol);
    let mut out = Matrix::zeros(cols, rows);
    for (k, s) in sigma.iter().take(rank).enumerate() {
        out += (v.column(k) * u.column(k).transpose()) / *s;
    }
    out
}

/// Extremal eigenvalues `(lambda_min, lambda_max)` of a symmetric matrix.
pub fn sym_eig_extremes(s: &Matrix, tol: &Tolerance) -> Result<(f64, f64)> {
    if !s.is_square() {
        return Err(FrameError::NotSquare {
            rows: s.nrows(),
            cols: s.ncols(),
        });
    }
    if s.nrows() == 0 {
        return Ok((0.0, 0.0));
    }
    let asymmetry = (s - s.transpose()).norm();
    if asymmetry > tol.orth_tol * s.norm() {
        return Err(FrameError::NonSymmetric { asymmetry });
    }
    let sym = (s + s.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym).eigenvalues;
    let lo = eig.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}

/// Spectral norm.
pub fn operator_norm(a: &Matrix) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// Smallest singular value above the rank cutoff; 0 for a numerically zero matrix.
pub fn reduced_min_modulus(a: &Matrix, tol: &Tolerance) -> f64 {
    let sigma = singular_values(a);
    match rank_from_sorted(&sigma, tol) {
        0 => 0.0,
        r => sigma[r - 1],
    }
}

/// Symmetric part `(A + A^T) / 2`.
pub fn symmetric_part(a: &Matrix) -> Matrix {
    (a + a.transpose()) * 0.5
}

/// Inverse of a square matrix whose reduced minimum modulus exceeds `frame_eps`.
pub fn checked_inverse(a: &Matrix, tol: &Tolerance) -> Result<Matrix> {
    if !a.is_square() {
        return Err(FrameError::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    let n = a.nrows();
    let sigma = singular_values(a);
    let rank = rank_from_sorted(&sigma, tol);
    let gamma = sigma.last().copied().unwrap_or(0.0);
    if rank < n || gamma <= tol.frame_eps {
        return Err(FrameError::SingularOperator { gamma });
    }
    a.clone()
        .try_inverse()
        .ok_or(FrameError::SingularOperator { gamma })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cols(vs: &[&[f64]]) -> Matrix {
        let n = vs[0].len();
        Matrix::from_fn(n, vs.len(), |i, j| vs[j][i])
    }

    #[test]
    fn orthonormal_columns_examples() {
        let tol = Tolerance::default();
        let q = orthonormal_columns(&cols(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]), &tol);
        assert_eq!(q.ncols(), 2);
        assert_relative_eq!(q.transpose() * &q, Matrix::identity(2, 2), epsilon = 1e-12);
        assert!(q.row(2).norm() < 1e-14);

        let q = orthonormal_columns(&cols(&[&[1.0, 0.0], &[2.0, 0.0]]), &tol);
        assert_eq!(q.ncols(), 1);
        assert_relative_eq!(q[(0, 0)].abs(), 1.0, epsilon = 1e-14);
        assert!(q[(1, 0)].abs() < 1e-14);

        let q = orthonormal_columns(&cols(&[&[0.0, 0.5, 1.0]]), &tol);
        let s5 = 5f64.sqrt();
        assert_relative_eq!(q[(1, 0)], 1.0 / s5, epsilon = 1e-14);
        assert_relative_eq!(q[(2, 0)], 2.0 / s5, epsilon = 1e-14);
    }

    #[test]
    fn orthonormal_columns_of_zero_and_empty() {
        let tol = Tolerance::default();
        assert_eq!(orthonormal_columns(&Matrix::zeros(3, 2), &tol).ncols(), 0);
        assert_eq!(
            orthonormal_columns(&Matrix::zeros(3, 0), &tol).shape(),
            (3, 0)
        );
    }

    #[test]
    fn pinv_examples() {
        let tol = Tolerance::default();
        let d = Matrix::from_diagonal(&Vector::from_vec(vec![2.0, 1.0, 0.0]));
        let p = pinv(&d, &tol);
        let expected = Matrix::from_diagonal(&Vector::from_vec(vec![0.5, 1.0, 0.0]));
        assert_relative_eq!(p, expected, epsilon = 1e-14);
        assert_relative_eq!(
            pinv(&Matrix::identity(4, 4), &tol),
            Matrix::identity(4, 4),
            epsilon = 1e-14
        );
        assert_eq!(pinv(&Matrix::zeros(2, 3), &tol), Matrix::zeros(3, 2));
    }

    #[test]
    fn eig_extremes_examples() {
        let tol = Tolerance::default();
        let d = Matrix::from_diagonal(&Vector::from_vec(vec![1.0, 2.0, 1.0]));
        assert_eq!(sym_eig_extremes(&d, &tol).unwrap(), (1.0, 2.0));
        let (lo, hi) = sym_eig_extremes(&Matrix::identity(3, 3), &tol).unwrap();
        assert_relative_eq!(lo, 1.0);
        assert_relative_eq!(hi, 1.0);
        let s = Matrix::from_row_slice(2, 2, &[1.5, 0.5, 0.5, 0.5]);
        let (lo, hi) = sym_eig_extremes(&s, &tol).unwrap();
        let h = 2f64.sqrt() / 2.0;
        assert_relative_eq!(lo, 1.0 - h, max_relative = 1e-10);
        assert_relative_eq!(hi, 1.0 + h, max_relative = 1e-10);
    }

    #[test]
    fn eig_extremes_rejects_asymmetric() {
        let a = Matrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert!(matches!(
            sym_eig_extremes(&a, &Tolerance::default()),
            Err(FrameError::NonSymmetric { .. })
        ));
    }

    #[test]
    fn norms_and_moduli() {
        let tol = Tolerance::default();
        let d = Matrix::from_diagonal(&Vector::from_vec(vec![2.0, 1.0, 0.0]));
        assert_relative_eq!(operator_norm(&d), 2.0, epsilon = 1e-14);
        assert_eq!(operator_norm(&Matrix::zeros(3, 3)), 0.0);
        assert_relative_eq!(reduced_min_modulus(&d, &tol), 1.0, epsilon = 1e-14);
        assert_relative_eq!(
            reduced_min_modulus(&Matrix::identity(3, 3), &tol),
            1.0,
            epsilon = 1e-14
        );
        assert_eq!(reduced_min_modulus(&Matrix::zeros(2, 2), &tol), 0.0);

        // (Tv) v^T with |Tv| = 1/sqrt 2 and |v| = 1
        let t = Matrix::from_diagonal(&Vector::from_vec(vec![2.0, 1.0, 0.0]));
        let v = Vector::from_vec(vec![0.0, 1.0, 1.0]) / 2f64.sqrt();
        let a = (&t * &v) * v.transpose();
        assert_relative_eq!(
            reduced_min_modulus(&a, &tol),
            1.0 / 2f64.sqrt(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn rank_examples() {
        let tol = Tolerance::default();
        let a = cols(&[
            &[1.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0],
            &[0.0, 0.0, 1.0],
        ]);
        assert_eq!(numerical_rank(&a, &tol), 3);
        assert_eq!(numerical_rank(&Matrix::zeros(3, 3), &tol), 0);
        assert_eq!(numerical_rank(&Matrix::identity(4, 4), &tol), 4);
    }

    #[test]
    fn complement_and_null_space() {
        let tol = Tolerance::default();
        let plane = cols(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
        let c = complement_columns(&plane, &tol);
        assert_eq!(c.ncols(), 1);
        assert_relative_eq!(c[(2, 0)], 1.0, epsilon = 1e-14);

        let d = Matrix::from_diagonal(&Vector::from_vec(vec![2.0, 1.0, 0.0]));
        let n = null_space(&d, &tol);
        assert_eq!(n.ncols(), 1);
        assert_relative_eq!(n[(2, 0)], 1.0, epsilon = 1e-14);
        assert_eq!(null_space(&Matrix::identity(3, 3), &tol).ncols(), 0);
    }

    #[test]
    fn singular_inverse_is_rejected() {
        let tol = Tolerance::default();
        let d = Matrix::from_diagonal(&Vector::from_vec(vec![2.0, 1.0, 0.0]));
        assert!(matches!(
            checked_inverse(&d, &tol),
            Err(FrameError::SingularOperator { .. })
        ));
        let t = Matrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        let inv = checked_inverse(&t, &tol).unwrap();
        assert_relative_eq!(
            inv,
            Matrix::from_row_slice(2, 2, &[1.0, -1.0, 0.0, 1.0]),
            epsilon = 1e-14
        );
    }

    #[test]
    fn tolerance_validation() {
        assert!(Tolerance::new(0.0, 1e-9, 1e-10, 1e-9).is_err());
        assert!(Tolerance::default().with_frame_eps(1.5).is_err());
        assert!(Tolerance::default().with_rank_tol(1e-8).is_ok());
    }
}
