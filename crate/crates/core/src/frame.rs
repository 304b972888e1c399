//! Fusion frames and the single-frame computations: frame operator, optimal
//! bounds, canonical and enlarged duals, Riesz checks and local frames.

use nalgebra::SymmetricEigen;

use crate::error::{FrameError, Result};
use crate::numeric::{
    checked_inverse, numerical_rank, operator_norm, sym_eig_extremes, Matrix, Tolerance, Vector,
};
use crate::subspace::Subspace;

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSubspace {
    pub subspace: Subspace,
    pub weight: f64,
}

impl WeightedSubspace {
    pub fn new(subspace: Subspace, weight: f64) -> Result<Self> {
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(FrameError::NonPositiveWeight { index: 0, weight });
        }
        Ok(Self { subspace, weight })
    }

    pub fn unit(subspace: Subspace) -> Self {
        Self {
            subspace,
            weight: 1.0,
        }
    }
}

/// Optimal frame (or Riesz) bounds `C <= D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

impl FrameBounds {
    pub(crate) fn from_extremes(lo: f64, hi: f64) -> Self {
        let lower = lo.max(0.0);
        let upper = hi.max(lower);
        Self { lower, upper }
    }
}

/// An ordered family `{(W_i, w_i)}` of weighted subspaces of one ambient space.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionFrame {
    ambient_dim: usize,
    members: Vec<WeightedSubspace>,
}

impl FusionFrame {
    pub fn new(ambient_dim: usize, members: Vec<WeightedSubspace>) -> Result<Self> {
        if members.is_empty() {
            return Err(FrameError::LengthMismatch {
                expected: 1,
                found: 0,
            });
        }
        for (index, m) in members.iter().enumerate() {
            if m.subspace.ambient_dim() != ambient_dim {
                return Err(FrameError::DimensionMismatch {
                    expected: ambient_dim,
                    found: m.subspace.ambient_dim(),
                });
            }
            if !(m.weight > 0.0 && m.weight.is_finite()) {
                return Err(FrameError::NonPositiveWeight {
                    index,
                    weight: m.weight,
                });
            }
        }
        Ok(Self {
            ambient_dim,
            members,
        })
    }

    /// 1-uniform family.
    pub fn uniform(ambient_dim: usize, subspaces: Vec<Subspace>) -> Result<Self> {
        Self::new(
            ambient_dim,
            subspaces.into_iter().map(WeightedSubspace::unit).collect(),
        )
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[WeightedSubspace] {
        &self.members
    }

    pub fn subspaces(&self) -> Vec<Subspace> {
        self.members.iter().map(|m| m.subspace.clone()).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.members.iter().map(|m| m.weight).collect()
    }

    pub fn is_uniform(&self) -> bool {
        self.members.iter().all(|m| m.weight == 1.0)
    }

    /// `S = sum w_i^2 P_i`.
    pub fn frame_operator(&self) -> Matrix {
        let n = self.ambient_dim;
        self.members.iter().fold(Matrix::zeros(n, n), |acc, m| {
            acc + m.subspace.projector() * (m.weight * m.weight)
        })
    }

    /// `T_W^* f = {w_i P_i f}`.
    pub fn analysis(&self, f: &Vector) -> Result<Vec<Vector>> {
        self.check_vector(f)?;
        Ok(self
            .members
            .iter()
            .map(|m| m.subspace.project(f) * m.weight)
            .collect())
    }

    /// `T_W {f_i} = sum w_i f_i`, each `f_i` required to lie in `W_i`.
    pub fn synthesis(&self, parts: &[Vector], tol: &Tolerance) -> Result<Vector> {
        if parts.len() != self.len() {
            return Err(FrameError::LengthMismatch {
                expected: self.len(),
                found: parts.len(),
            });
        }
        let mut out = Vector::zeros(self.ambient_dim);
        for (index, (m, p)) in self.members.iter().zip(parts).enumerate() {
            self.check_vector(p)?;
            if !m.subspace.contains_vector(p, tol)? {
                let residual = (p - m.subspace.project(p)).norm();
                return Err(FrameError::PartOutsideSubspace { index, residual });
            }
            out += p * m.weight;
        }
        Ok(out)
    }

    /// `sum w_i^2 ||P_i f||^2`.
    pub fn energy(&self, f: &Vector) -> f64 {
        self.members
            .iter()
            .map(|m| m.weight * m.weight * m.subspace.project(f).norm_squared())
            .sum()
    }

    fn check_vector(&self, f: &Vector) -> Result<()> {
        if f.len() != self.ambient_dim {
            return Err(FrameError::DimensionMismatch {
                expected: self.ambient_dim,
                found: f.len(),
            });
        }
        Ok(())
    }

    /// Optimal bounds as the extremal eigenvalues of `S`; the flag tells
    /// whether the lower bound clears `frame_eps`.
    pub fn bounds(&self, tol: &Tolerance) -> (FrameBounds, bool) {
        let (lo, hi) = sym_eig_extremes(&self.frame_operator(), tol)
            .expect("frame operator is symmetric by construction");
        let b = FrameBounds::from_extremes(lo, hi);
        (b, lo > tol.frame_eps)
    }

    pub fn is_frame(&self, tol: &Tolerance) -> bool {
        self.bounds(tol).1
    }

    /// Bounds of `S` compressed to `space`.
    pub fn bounds_on(&self, space: &Subspace, tol: &Tolerance) -> Result<FrameBounds> {
        if space.ambient_dim() != self.ambient_dim {
            return Err(FrameError::DimensionMismatch {
                expected: self.ambient_dim,
                found: space.ambient_dim(),
            });
        }
        if space.is_zero() {
            return Ok(FrameBounds::from_extremes(0.0, 0.0));
        }
        let q = space.basis();
        let compressed = q.transpose() * self.frame_operator() * q;
        let compressed = (&compressed + compressed.transpose()) * 0.5;
        let (lo, hi) = sym_eig_extremes(&compressed, tol)?;
        Ok(FrameBounds::from_extremes(lo, hi))
    }

    /// Closed span of all members.
    pub fn span(&self, tol: &Tolerance) -> Subspace {
        let cols: Vec<Vector> = self
            .members
            .iter()
            .flat_map(|m| m.subspace.basis_vectors())
            .collect();
        Subspace::span_of(self.ambient_dim, &cols, tol)
            .expect("members share the ambient dimension")
    }

    /// Bounds as a fusion frame sequence, i.e. on the span of the members.
    pub fn bounds_on_span(&self, tol: &Tolerance) -> FrameBounds {
        self.bounds_on(&self.span(tol), tol)
            .expect("span lives in the ambient space")
    }

    fn inverse_frame_operator(&self, tol: &Tolerance) -> Result<Matrix> {
        let (b, is_frame) = self.bounds(tol);
        if !is_frame {
            return Err(FrameError::NotAFrame { lower: b.lower });
        }
        checked_inverse(&self.frame_operator(), tol)
    }

    /// `{(S^{-1} W_i, w_i)}`.
    pub fn canonical_dual(&self, tol: &Tolerance) -> Result<FusionFrame> {
        let s_inv = self.inverse_frame_operator(tol)?;
        let members = self
            .members
            .iter()
            .map(|m| {
                Ok(WeightedSubspace {
                    subspace: m.subspace.apply(&s_inv, tol)?,
                    weight: m.weight,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        FusionFrame::new(self.ambient_dim, members)
    }

    /// Dual obtained by enlarging each canonical dual subspace `S^{-1} W_i`
    /// with the vectors in `extra[i]`.
    pub fn enlarge_canonical_dual(
        &self,
        extra: &[Vec<Vector>],
        tol: &Tolerance,
    ) -> Result<FusionFrame> {
        if extra.len() != self.len() {
            return Err(FrameError::LengthMismatch {
                expected: self.len(),
                found: extra.len(),
            });
        }
        let canonical = self.canonical_dual(tol)?;
        let members = canonical
            .members
            .iter()
            .zip(extra)
            .map(|(m, more)| {
                let mut vectors = m.subspace.basis_vectors();
                vectors.extend(more.iter().cloned());
                Ok(WeightedSubspace {
                    subspace: Subspace::span_of(self.ambient_dim, &vectors, tol)?,
                    weight: m.weight,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let dual = FusionFrame::new(self.ambient_dim, members)?;
        let defect = approx_dual_defect(self, &dual, tol)?;
        if defect > tol.dual_tol {
            return Err(FrameError::DualityLost { defect });
        }
        Ok(dual)
    }

    /// Local frames `{w_i e_ij}` from each member's stored orthonormal basis.
    pub fn to_discrete(&self) -> DiscreteFrame {
        DiscreteFrame {
            ambient_dim: self.ambient_dim,
            groups: self
                .members
                .iter()
                .map(|m| {
                    m.subspace
                        .basis_vectors()
                        .into_iter()
                        .map(|e| e * m.weight)
                        .collect()
                })
                .collect(),
        }
    }

    pub fn is_riesz_basis(&self, tol: &Tolerance) -> bool {
        let subspaces = self.subspaces();
        let (_, riesz) =
            riesz_sequence_bounds(&subspaces, tol).expect("members share the ambient dimension");
        riesz
            && numerical_rank(&concat_bases(self.ambient_dim, &subspaces), tol) == self.ambient_dim
    }

    /// Mutually orthogonal members whose dimensions add up to the ambient dimension.
    pub fn is_orthonormal_fusion_basis(&self, tol: &Tolerance) -> bool {
        let total: usize = self.members.iter().map(|m| m.subspace.dim()).sum();
        if total != self.ambient_dim {
            return false;
        }
        for (i, a) in self.members.iter().enumerate() {
            for b in &self.members[i + 1..] {
                let cross = a.subspace.basis().transpose() * b.subspace.basis();
                if operator_norm(&cross) > tol.orth_tol {
                    return false;
                }
            }
        }
        true
    }
}

/// A vector frame whose vectors are grouped by the index they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteFrame {
    pub ambient_dim: usize,
    pub groups: Vec<Vec<Vector>>,
}

impl DiscreteFrame {
    pub fn vector_count(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    pub fn vectors(&self) -> impl Iterator<Item = &Vector> {
        self.groups.iter().flatten()
    }

    /// `sum v v^T`.
    pub fn frame_operator(&self) -> Matrix {
        let n = self.ambient_dim;
        self.vectors()
            .fold(Matrix::zeros(n, n), |acc, v| acc + v * v.transpose())
    }

    pub fn bounds(&self, tol: &Tolerance) -> (FrameBounds, bool) {
        let (lo, hi) = sym_eig_extremes(&self.frame_operator(), tol)
            .expect("frame operator is symmetric by construction");
        (FrameBounds::from_extremes(lo, hi), lo > tol.frame_eps)
    }
}

fn check_pair(w: &FusionFrame, v: &FusionFrame) -> Result<()> {
    if w.ambient_dim != v.ambient_dim {
        return Err(FrameError::DimensionMismatch {
            expected: w.ambient_dim,
            found: v.ambient_dim,
        });
    }
    if w.len() != v.len() {
        return Err(FrameError::LengthMismatch {
            expected: w.len(),
            found: v.len(),
        });
    }
    Ok(())
}

/// `psi = sum w_i v_i P_{V_i} S_W^{-1} P_{W_i}`.
pub fn mixed_frame_operator(w: &FusionFrame, v: &FusionFrame, tol: &Tolerance) -> Result<Matrix> {
    check_pair(w, v)?;
    let s_inv = w.inverse_frame_operator(tol)?;
    let n = w.ambient_dim;
    Ok(w.members
        .iter()
        .zip(&v.members)
        .fold(Matrix::zeros(n, n), |acc, (a, b)| {
            acc + b.subspace.projector() * &s_inv * a.subspace.projector() * (a.weight * b.weight)
        }))
}

/// `||I - psi||`; `v` is an approximate dual of `w` when this is below one.
pub fn approx_dual_defect(w: &FusionFrame, v: &FusionFrame, tol: &Tolerance) -> Result<f64> {
    let psi = mixed_frame_operator(w, v, tol)?;
    let n = w.ambient_dim;
    Ok(operator_norm(&(Matrix::identity(n, n) - psi)))
}

pub fn is_dual(w: &FusionFrame, v: &FusionFrame, tol: &Tolerance) -> Result<bool> {
    Ok(approx_dual_defect(w, v, tol)? <= tol.dual_tol)
}

pub fn is_approximate_dual(w: &FusionFrame, v: &FusionFrame, tol: &Tolerance) -> Result<bool> {
    Ok(approx_dual_defect(w, v, tol)? < 1.0)
}

fn concat_bases(ambient_dim: usize, subspaces: &[Subspace]) -> Matrix {
    let cols: Vec<Vector> = subspaces.iter().flat_map(|s| s.basis_vectors()).collect();
    if cols.is_empty() {
        Matrix::zeros(ambient_dim, 0)
    } else {
        Matrix::from_columns(&cols)
    }
}

fn check_ambient(subspaces: &[Subspace]) -> Result<usize> {
    let n = subspaces.first().map_or(0, Subspace::ambient_dim);
    if let Some(s) = subspaces.iter().find(|s| s.ambient_dim() != n) {
        return Err(FrameError::DimensionMismatch {
            expected: n,
            found: s.ambient_dim(),
        });
    }
    Ok(n)
}

/// Riesz sequence bounds `(sigma_min^2, sigma_max^2)` of the concatenated
/// orthonormal bases. An empty concatenation is reported as `(0, 0)`, not Riesz.
pub fn riesz_sequence_bounds(
    subspaces: &[Subspace],
    tol: &Tolerance,
) -> Result<(FrameBounds, bool)> {
    let n = check_ambient(subspaces)?;
    let b = concat_bases(n, subspaces);
    if b.ncols() == 0 {
        return Ok((FrameBounds::from_extremes(0.0, 0.0), false));
    }
    let gram = b.transpose() * &b;
    let (lo, hi) = sym_eig_extremes(&gram, tol)?;
    Ok((FrameBounds::from_extremes(lo, hi), lo > tol.frame_eps))
}

/// Parts `f_i ∈ W_i` with `sum ||f_i||^2 = 1` and `sum f_i ≈ 0`, when the
/// family fails to be a Riesz sequence.
pub fn riesz_witness(subspaces: &[Subspace], tol: &Tolerance) -> Result<Option<Vec<Vector>>> {
    let n = check_ambient(subspaces)?;
    let b = concat_bases(n, subspaces);
    if b.ncols() == 0 {
        return Ok(None);
    }
    let gram = b.transpose() * &b;
    let eig = SymmetricEigen::new((&gram + gram.transpose()) * 0.5);
    let (k, lo) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty gram");
    if lo > tol.frame_eps {
        return Ok(None);
    }
    let coeffs = eig.eigenvectors.column(k).into_owned();
    let mut offset = 0;
    let parts = subspaces
        .iter()
        .map(|s| {
            let c = coeffs.rows(offset, s.dim()).into_owned();
            offset += s.dim();
            s.basis() * c
        })
        .collect();
    Ok(Some(parts))
}
