//! Closed subspaces of R^n stored through an orthonormal basis.

use crate::error::{FrameError, Result};
use crate::numeric::{
    complement_columns, null_space, operator_norm, orthonormal_columns, sorted_svd, Matrix,
    Tolerance, Vector,
};

#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            basis: Matrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            basis: Matrix::identity(ambient_dim, ambient_dim),
        }
    }

    /// Span of the given vectors. All vectors must share the length `ambient_dim`.
    pub fn span_of(ambient_dim: usize, vectors: &[Vector], tol: &Tolerance) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient_dim) {
            return Err(FrameError::DimensionMismatch {
                expected: ambient_dim,
                found: v.len(),
            });
        }
        if vectors.is_empty() {
            return Ok(Self::zero(ambient_dim));
        }
        Self::column_span(&Matrix::from_columns(vectors), tol)
    }

    /// Column space of `a`.
    pub fn column_span(a: &Matrix, tol: &Tolerance) -> Result<Self> {
        crate::numeric::ensure_finite(a)?;
        Ok(Self {
            basis: orthonormal_columns(a, tol),
        })
    }

    /// Wraps a basis that is already orthonormal (checked against `orth_tol`).
    pub fn from_orthonormal(basis: Matrix, tol: &Tolerance) -> Result<Self> {
        crate::numeric::ensure_finite(&basis)?;
        let k = basis.ncols();
        if k > basis.nrows() {
            return Err(FrameError::DimensionMismatch {
                expected: basis.nrows(),
                found: k,
            });
        }
        let gram = basis.transpose() * &basis;
        if (gram - Matrix::identity(k, k)).norm() > tol.orth_tol * (k.max(1) as f64) {
            return Self::column_span(&basis, tol);
        }
        Ok(Self { basis })
    }

    /// Coordinate subspace spanned by the standard basis vectors at `indices`.
    pub fn coordinate(ambient_dim: usize, indices: &[usize]) -> Self {
        let mut basis = Matrix::zeros(ambient_dim, indices.len());
        for (k, &i) in indices.iter().enumerate() {
            basis[(i, k)] = 1.0;
        }
        Self { basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.ncols() == 0
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        self.basis.column_iter().map(|c| c.into_owned()).collect()
    }

    /// Orthogonal projector `B B^T`.
    pub fn projector(&self) -> Matrix {
        &self.basis * self.basis.transpose()
    }

    pub fn project(&self, f: &Vector) -> Vector {
        &self.basis * (self.basis.transpose() * f)
    }

    /// Projector distance `||P - Q||`.
    pub fn distance(&self, other: &Subspace) -> Result<f64> {
        self.check_same_ambient(other)?;
        Ok(operator_norm(&(self.projector() - other.projector())))
    }

    fn check_same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(FrameError::DimensionMismatch {
                expected: self.ambient_dim(),
                found: other.ambient_dim(),
            });
        }
        Ok(())
    }

    /// Residual `||(I - P_self) B_other||`; zero when `other` lies in `self`.
    pub fn inclusion_residual(&self, other: &Subspace) -> Result<f64> {
        self.check_same_ambient(other)?;
        if other.is_zero() {
            return Ok(0.0);
        }
        let r = &other.basis - &self.basis * (self.basis.transpose() * &other.basis);
        Ok(operator_norm(&r))
    }

    /// Whether `other` is contained in `self`.
    pub fn contains(&self, other: &Subspace, tol: &Tolerance) -> Result<bool> {
        Ok(self.inclusion_residual(other)? <= tol.orth_tol)
    }

    pub fn contains_vector(&self, v: &Vector, tol: &Tolerance) -> Result<bool> {
        if v.len() != self.ambient_dim() {
            return Err(FrameError::DimensionMismatch {
                expected: self.ambient_dim(),
                found: v.len(),
            });
        }
        Ok((v - self.project(v)).norm() <= tol.orth_tol * v.norm().max(1.0))
    }

    pub fn sum(&self, other: &Subspace, tol: &Tolerance) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        let mut cols = self.basis_vectors();
        cols.extend(other.basis_vectors());
        Subspace::span_of(self.ambient_dim(), &cols, tol)
    }

    /// `self ∩ other`, from the null space of `(I - P_other) B_self`.
    ///
    /// The singular values of that matrix are the sines of the principal
    /// angles, so directions whose sine is at most `rank_tol` are kept.
    pub fn intersect(&self, other: &Subspace, tol: &Tolerance) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        let n = self.ambient_dim();
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(n));
        }
        let residual = &self.basis - &other.basis * (other.basis.transpose() * &self.basis);
        // k <= n, so V is square and every column is accounted for
        let (_, sigma, v) = sorted_svd(&residual);
        let keep_from = sigma.iter().take_while(|&&s| s > tol.rank_tol).count();
        let coeffs: Vec<Vector> = (keep_from..sigma.len())
            .map(|j| v.column(j).into_owned())
            .collect();
        if coeffs.is_empty() {
            return Ok(Subspace::zero(n));
        }
        let directions = &self.basis * Matrix::from_columns(&coeffs);
        Subspace::column_span(&directions, tol)
    }

    pub fn ortho_complement(&self, tol: &Tolerance) -> Subspace {
        let n = self.ambient_dim();
        if self.is_zero() {
            return Subspace::full(n);
        }
        Subspace {
            basis: complement_columns(&self.basis, tol),
        }
    }

    /// `self ⊖ inner`, i.e. `self ∩ inner^⊥` for `inner ⊆ self`.
    pub fn reduce_by(&self, inner: &Subspace, tol: &Tolerance) -> Result<Subspace> {
        self.check_same_ambient(inner)?;
        if inner.is_zero() {
            return Ok(self.clone());
        }
        let r = &self.basis - &inner.basis * (inner.basis.transpose() * &self.basis);
        // columns of r span a space of dimension dim(self) - dim(inner) with unit singular values
        let (u, sigma, _) = sorted_svd(&r);
        let keep = sigma.iter().take_while(|&&s| s > 0.5).count();
        Subspace::column_span(&u.columns(0, keep).into_owned(), tol)
    }

    /// Friedrichs cosine `c(self, other)`: the norm of `P_{M'} P_{N'}` after
    /// removing the common part `M ∩ N` from both. Zero when either remainder
    /// is trivial.
    pub fn friedrichs_cos(&self, other: &Subspace, tol: &Tolerance) -> Result<f64> {
        self.check_same_ambient(other)?;
        let common = self.intersect(other, tol)?;
        let m = self.reduce_by(&common, tol)?;
        let n = other.reduce_by(&common, tol)?;
        if m.is_zero() || n.is_zero() {
            return Ok(0.0);
        }
        let c = operator_norm(&(m.basis.transpose() * &n.basis));
        Ok(c.min(1.0))
    }

    /// Image `T V` as a subspace of the codomain of `t`.
    pub fn apply(&self, t: &Matrix, tol: &Tolerance) -> Result<Subspace> {
        if t.ncols() != self.ambient_dim() {
            return Err(FrameError::DimensionMismatch {
                expected: self.ambient_dim(),
                found: t.ncols(),
            });
        }
        if self.is_zero() {
            return Ok(Subspace::zero(t.nrows()));
        }
        Subspace::column_span(&(t * &self.basis), tol)
    }
}

/// Null space `N(T)` as a subspace of the domain.
pub fn kernel(t: &Matrix, tol: &Tolerance) -> Subspace {
    Subspace {
        basis: null_space(t, tol),
    }
}

/// Range `R(T)` as a subspace of the codomain.
pub fn range(t: &Matrix, tol: &Tolerance) -> Subspace {
    Subspace {
        basis: orthonormal_columns(t, tol),
    }
}
