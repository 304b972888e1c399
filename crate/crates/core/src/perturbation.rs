//! Fusion frames under operator perturbations.
//!
//! The checks here evaluate, for concrete operators and families, the
//! commutation identity `P_V T^T = P_V T^T P_{TV}`, the reduced-minimum-modulus
//! sandwich for `T P_V`, the comparison between `{T^+ T W_i}` and `{T W_i}`,
//! and the three sufficient conditions under which `W` and `TW` are woven.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{FrameError, Result};
use crate::frame::{FrameBounds, FusionFrame};
use crate::numeric::{
    checked_inverse, operator_norm, pinv, reduced_min_modulus, sym_eig_extremes, symmetric_part,
    Matrix, Tolerance,
};
use crate::random::unit_vector;
use crate::subspace::{kernel, range, Subspace};
use crate::weaving::{
    discrete_weaving_report, transform_frame, weaving_report, WeavingMode, WeavingReport,
};

const CHAIN_SAMPLES: usize = 100;
const CHAIN_SEED: u64 = 0x6f70_3172;
const SUBSET_ENUM_LIMIT: usize = 20;
const SUBSET_SAMPLES: usize = 4096;
const SUBSET_SEED: u64 = 0x7375_6273;

/// `S_σ = sum_{i∈σ} w_i^2 P_i` with zero-based indices.
pub fn partial_frame_operator(f: &FusionFrame, sigma: &[usize]) -> Result<Matrix> {
    let n = f.ambient_dim();
    let mut s = Matrix::zeros(n, n);
    for &i in sigma {
        let m = f.members().get(i).ok_or(FrameError::IndexOutOfRange {
            index: i,
            len: f.len(),
        })?;
        s += m.subspace.projector() * (m.weight * m.weight);
    }
    Ok(s)
}

/// `||P_V T^T - P_V T^T P_{TV}||`, which vanishes identically.
pub fn lemma_commute_residual(t: &Matrix, v: &Subspace, tol: &Tolerance) -> Result<f64> {
    let image = v.apply(t, tol)?;
    let pv_tt = v.projector() * t.transpose();
    Ok(operator_norm(&(&pv_tt - &pv_tt * image.projector())))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusSandwich {
    /// Friedrichs cosine `c(N(T), V)`.
    pub c: f64,
    /// `γ(T) (1 - c^2)^{1/2}`
    pub lhs: f64,
    /// `γ(T P_V)`
    pub mid: f64,
    /// `||T|| (1 - c^2)^{1/2}`
    pub rhs: f64,
    pub holds: bool,
}

/// Bounds `γ(T)(1-c²)^{1/2} <= γ(T P_V) <= ||T||(1-c²)^{1/2}` with
/// `c = c(N(T), V)`.
///
/// When `V ⊆ N(T)` the product `T P_V` vanishes and the angle is reported as
/// `c = 1`, outside the domain of the estimate.
pub fn modulus_sandwich(t: &Matrix, v: &Subspace, tol: &Tolerance) -> Result<ModulusSandwich> {
    if t.ncols() != v.ambient_dim() {
        return Err(FrameError::DimensionMismatch {
            expected: v.ambient_dim(),
            found: t.ncols(),
        });
    }
    let t_pv = t * v.projector();
    if v.is_zero() || operator_norm(&t_pv) <= tol.rank_tol * operator_norm(t).max(f64::MIN_POSITIVE)
    {
        return Err(FrameError::AngleNotLessThanOne { c: 1.0 });
    }
    let c = kernel(t, tol).friedrichs_cos(v, tol)?;
    if c >= 1.0 - tol.rank_tol {
        return Err(FrameError::AngleNotLessThanOne { c });
    }
    let sine = (1.0 - c * c).sqrt();
    let lhs = reduced_min_modulus(t, tol) * sine;
    let mid = reduced_min_modulus(&t_pv, tol);
    let rhs = operator_norm(t) * sine;
    Ok(ModulusSandwich {
        c,
        lhs,
        mid,
        rhs,
        holds: lhs - 1e-9 <= mid && mid <= rhs + 1e-9,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Operator1Record {
    /// `{(T^+ T W_i, w_i)}` compressed to `R(T^T)`.
    pub left_bounds: FrameBounds,
    pub left_is_frame: bool,
    /// `{(T W_i, w_i)}` on the whole space.
    pub right_bounds: FrameBounds,
    pub right_is_frame: bool,
    /// `{(T W_i, w_i)}` compressed to `R(T)`.
    pub right_range_bounds: FrameBounds,
    pub right_is_frame_on_range: bool,
    pub gamma: f64,
    pub norm: f64,
    /// `γ² Σ||P_{TW_i} f||² <= Σ||P_{T^+TW_i} T^T f||² <= ||T||² Σ||P_{TW_i} f||²`
    /// on every sampled `f` (weights included).
    pub chain_ok: bool,
    /// Left family is a frame for `R(T^T)` iff right family is a frame for the whole space.
    pub equivalence_ok: bool,
    /// Left family is a frame for `R(T^T)` iff right family is a frame for `R(T)`.
    pub range_equivalence_ok: bool,
}

/// Compares `{(T^+ T W_i, w_i)}` on `R(T^T)` with `{(T W_i, w_i)}`.
///
/// The equivalence with the right family being a frame for the whole space
/// is reported, not assumed: it fails for singular `T`, while the inequality
/// chain and the equivalence on `R(T)` hold for every nonzero `T`.
pub fn operator1_check(t: &Matrix, f: &FusionFrame, tol: &Tolerance) -> Result<Operator1Record> {
    let n = f.ambient_dim();
    if !t.is_square() {
        return Err(FrameError::NotSquare {
            rows: t.nrows(),
            cols: t.ncols(),
        });
    }
    if t.nrows() != n {
        return Err(FrameError::DimensionMismatch {
            expected: n,
            found: t.nrows(),
        });
    }
    let gamma = reduced_min_modulus(t, tol);
    if gamma <= tol.frame_eps {
        return Err(FrameError::ZeroOperator);
    }
    let norm = operator_norm(t);
    let projector_row = pinv(t, tol) * t;
    let left = transform_frame(&projector_row, f, tol)?;
    let right = transform_frame(t, f, tol)?;

    let row_space = range(&t.transpose(), tol);
    let col_space = range(t, tol);
    let left_bounds = left.bounds_on(&row_space, tol)?;
    let (right_bounds, right_is_frame) = right.bounds(tol);
    let right_range_bounds = right.bounds_on(&col_space, tol)?;
    let left_is_frame = left_bounds.lower > tol.frame_eps;
    let right_is_frame_on_range = right_range_bounds.lower > tol.frame_eps;

    let mut rng = ChaCha8Rng::seed_from_u64(CHAIN_SEED);
    let t_t = t.transpose();
    let chain_ok = (0..CHAIN_SAMPLES).all(|_| {
        let x = unit_vector(n, &mut rng);
        let right_energy = right.energy(&x);
        let left_energy = left.energy(&(&t_t * &x));
        let slack = 1e-9 * (1.0 + norm * norm * right_energy);
        gamma * gamma * right_energy <= left_energy + slack
            && left_energy <= norm * norm * right_energy + slack
    });

    Ok(Operator1Record {
        left_bounds,
        left_is_frame,
        right_bounds,
        right_is_frame,
        right_range_bounds,
        right_is_frame_on_range,
        gamma,
        norm,
        chain_ok,
        equivalence_ok: left_is_frame == right_is_frame,
        range_equivalence_ok: left_is_frame == right_is_frame_on_range,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inclusion {
    /// `W_i = T W_i`
    Both,
    /// `W_i ⊆ T W_i` only
    Forward,
    /// `T W_i ⊆ W_i` only
    Backward,
    Neither,
}

impl Inclusion {
    fn forward(self) -> bool {
        matches!(self, Inclusion::Both | Inclusion::Forward)
    }

    fn backward(self) -> bool {
        matches!(self, Inclusion::Both | Inclusion::Backward)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorCheck {
    pub holds: bool,
    /// Smallest eigenvalue of the symmetric part of `T S_σ - S_σ T` over the tested `σ`.
    pub min_eigenvalue: f64,
    /// Zero-based indices of the worst subset.
    pub worst_sigma: Vec<usize>,
    pub subsets_tested: usize,
    pub exhaustive: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Per1Witnesses {
    pub inclusion_pattern: Vec<Inclusion>,
    /// `W_i ⊆ T^T T W_i` per index.
    pub gram_inclusions: Vec<bool>,
    /// `||I - T^{-1}||`
    pub perturbation_norm: f64,
    /// `C_W / D_W`
    pub bound_ratio: f64,
    pub unitary_residual: f64,
    pub commutator: Option<CommutatorCheck>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Per1Verdict {
    /// All `W_i ⊆ T W_i`, or all `T W_i ⊆ W_i`.
    pub cond_i: bool,
    pub cond_ii: bool,
    /// `None` when `T` is not orthogonal.
    pub cond_iii: Option<bool>,
    /// From an exhaustive weaving report of `W` and `TW`, never from the conditions.
    pub woven_verdict: bool,
    pub woven_report: WeavingReport,
    pub witnesses: Per1Witnesses,
}

fn unitary_residual(t: &Matrix) -> f64 {
    let n = t.ncols();
    operator_norm(&(t.transpose() * t - Matrix::identity(n, n)))
}

fn subsets(len: usize) -> (Vec<Vec<usize>>, bool) {
    if len <= SUBSET_ENUM_LIMIT {
        let all = (0u64..1 << len)
            .map(|mask| (0..len).filter(|&i| mask >> i & 1 == 1).collect())
            .collect();
        (all, true)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(SUBSET_SEED);
        let some = (0..SUBSET_SAMPLES)
            .map(|_| (0..len).filter(|_| rng.random_bool(0.5)).collect())
            .collect();
        (some, false)
    }
}

/// Positivity of `T S_σ - S_σ T` for every `σ`, read as a nonnegative
/// quadratic form (symmetric part PSD up to `frame_eps`). Requires orthogonal `T`.
pub fn commutator_condition(
    t: &Matrix,
    f: &FusionFrame,
    tol: &Tolerance,
) -> Result<CommutatorCheck> {
    if t.nrows() != f.ambient_dim() || t.ncols() != f.ambient_dim() {
        return Err(FrameError::DimensionMismatch {
            expected: f.ambient_dim(),
            found: t.nrows(),
        });
    }
    let residual = unitary_residual(t);
    if residual > tol.orth_tol * (t.ncols().max(1) as f64) {
        return Err(FrameError::NotUnitary { residual });
    }
    let (list, exhaustive) = subsets(f.len());
    let mut min_eigenvalue = f64::INFINITY;
    let mut worst_sigma = Vec::new();
    for sigma in &list {
        let s = partial_frame_operator(f, sigma)?;
        let commutator = t * &s - &s * t;
        let (lo, _) = sym_eig_extremes(&symmetric_part(&commutator), tol)?;
        if lo < min_eigenvalue {
            min_eigenvalue = lo;
            worst_sigma = sigma.clone();
        }
    }
    Ok(CommutatorCheck {
        holds: min_eigenvalue >= -tol.frame_eps,
        min_eigenvalue,
        worst_sigma,
        subsets_tested: list.len(),
        exhaustive,
    })
}

/// Evaluates the three sufficient conditions for `W` and `TW` to be woven,
/// next to an independent exhaustive weaving verdict.
pub fn per1_conditions(t: &Matrix, f: &FusionFrame, tol: &Tolerance) -> Result<Per1Verdict> {
    let n = f.ambient_dim();
    if t.nrows() != n || t.ncols() != n {
        return Err(FrameError::DimensionMismatch {
            expected: n,
            found: t.nrows(),
        });
    }
    let t_inv = checked_inverse(t, tol)?;
    let tf = transform_frame(t, f, tol)?;
    let gram = t.transpose() * t;

    let inclusion_pattern = f
        .members()
        .iter()
        .zip(tf.members())
        .map(|(w, tw)| {
            let fwd = tw.subspace.contains(&w.subspace, tol)?;
            let bwd = w.subspace.contains(&tw.subspace, tol)?;
            Ok(match (fwd, bwd) {
                (true, true) => Inclusion::Both,
                (true, false) => Inclusion::Forward,
                (false, true) => Inclusion::Backward,
                (false, false) => Inclusion::Neither,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let cond_i = inclusion_pattern.iter().all(|p| p.forward())
        || inclusion_pattern.iter().all(|p| p.backward());

    let gram_inclusions = f
        .members()
        .iter()
        .map(|w| {
            let image = w.subspace.apply(&gram, tol)?;
            image.contains(&w.subspace, tol)
        })
        .collect::<Result<Vec<_>>>()?;
    let (bounds, _) = f.bounds(tol);
    let bound_ratio = if bounds.upper > 0.0 {
        bounds.lower / bounds.upper
    } else {
        0.0
    };
    let perturbation_norm = operator_norm(&(Matrix::identity(n, n) - &t_inv));
    let cond_ii = gram_inclusions.iter().all(|&b| b) && perturbation_norm < bound_ratio;

    let commutator = match commutator_condition(t, f, tol) {
        Ok(check) => Some(check),
        Err(FrameError::NotUnitary { .. }) => None,
        Err(e) => return Err(e),
    };
    let woven_report = weaving_report(&[f.clone(), tf], tol, WeavingMode::default())?;

    Ok(Per1Verdict {
        cond_i,
        cond_ii,
        cond_iii: commutator.as_ref().map(|c| c.holds),
        woven_verdict: woven_report.woven,
        woven_report,
        witnesses: Per1Witnesses {
            inclusion_pattern,
            gram_inclusions,
            perturbation_norm,
            bound_ratio,
            unitary_residual: unitary_residual(t),
            commutator,
        },
    })
}

/// Discrete counterpart of the second condition: the local orthonormal
/// frame `{w_i e_ij}` against `{w_i (T^T)^{-1} e_ij}`, woven over all
/// index assignments.
pub fn discrete_perturbation_report(
    t: &Matrix,
    f: &FusionFrame,
    tol: &Tolerance,
) -> Result<WeavingReport> {
    let t_inv_t = checked_inverse(t, tol)?.transpose();
    let local = f.to_discrete();
    let mut moved = local.clone();
    for group in &mut moved.groups {
        for v in group.iter_mut() {
            *v = &t_inv_t * &*v;
        }
    }
    discrete_weaving_report(&[local, moved], tol, WeavingMode::default())
}
