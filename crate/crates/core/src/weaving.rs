//! Weavings of several fusion frames over a common index set.
//!
//! A weaving is selected by an [`Assignment`], which names for every index
//! the frame that serves it. Blocks of the induced partition may be empty, so
//! the frames themselves are among their own weavings.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{FrameError, Result};
use crate::frame::{riesz_sequence_bounds, DiscreteFrame, FrameBounds, FusionFrame};
use crate::numeric::{checked_inverse, numerical_rank, operator_norm, Matrix, Tolerance, Vector};
use crate::subspace::Subspace;

/// Default cap on exhaustive enumeration, `2^20` assignments.
pub const DEFAULT_ENUM_CAP: u64 = 1 << 20;

/// `labels[i]` is the zero-based frame serving index `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    labels: Vec<usize>,
}

impl Assignment {
    pub fn new(labels: Vec<usize>, frame_count: usize) -> Result<Self> {
        if let Some(&bad) = labels.iter().find(|&&l| l >= frame_count) {
            return Err(FrameError::IndexOutOfRange {
                index: bad,
                len: frame_count,
            });
        }
        Ok(Self { labels })
    }

    /// Builds an assignment from one-based labels.
    pub fn from_one_based(labels: &[usize], frame_count: usize) -> Result<Self> {
        let zero_based = labels
            .iter()
            .map(|&l| {
                l.checked_sub(1).ok_or(FrameError::IndexOutOfRange {
                    index: l,
                    len: frame_count,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(zero_based, frame_count)
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Indices served by frame `j`.
    pub fn block(&self, j: usize) -> Vec<usize> {
        (0..self.labels.len())
            .filter(|&i| self.labels[i] == j)
            .collect()
    }
}

impl fmt::Display for Assignment {
    /// One-based labels joined by `-`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.labels.iter().map(|l| (l + 1).to_string()).collect();
        f.write_str(&parts.join("-"))
    }
}

fn assignment_count(index_count: usize, frame_count: usize) -> u128 {
    let mut total: u128 = 1;
    for _ in 0..index_count {
        total = total.saturating_mul(frame_count as u128);
    }
    total
}

/// Odometer over all `M^|I|` label maps in lexicographic order.
#[derive(Debug, Clone)]
pub struct Assignments {
    current: Option<Vec<usize>>,
    frame_count: usize,
}

impl Iterator for Assignments {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        let labels = self.current.clone()?;
        let mut next = labels.clone();
        let mut pos = next.len();
        loop {
            if pos == 0 {
                self.current = None;
                break;
            }
            pos -= 1;
            next[pos] += 1;
            if next[pos] < self.frame_count {
                self.current = Some(next);
                break;
            }
            next[pos] = 0;
        }
        Some(Assignment { labels })
    }
}

/// All assignments of `index_count` indices to `frame_count` frames.
pub fn assignments(index_count: usize, frame_count: usize, cap: u64) -> Result<Assignments> {
    if index_count == 0 {
        return Err(FrameError::LengthMismatch {
            expected: 1,
            found: 0,
        });
    }
    if frame_count == 0 {
        return Err(FrameError::NoFrames);
    }
    let count = assignment_count(index_count, frame_count);
    if count > cap as u128 {
        return Err(FrameError::EnumerationTooLarge { count, cap });
    }
    Ok(Assignments {
        current: Some(vec![0; index_count]),
        frame_count,
    })
}

fn check_frames(frames: &[FusionFrame]) -> Result<(usize, usize)> {
    let first = frames.first().ok_or(FrameError::NoFrames)?;
    let (n, len) = (first.ambient_dim(), first.len());
    for f in &frames[1..] {
        if f.ambient_dim() != n {
            return Err(FrameError::DimensionMismatch {
                expected: n,
                found: f.ambient_dim(),
            });
        }
        if f.len() != len {
            return Err(FrameError::LengthMismatch {
                expected: len,
                found: f.len(),
            });
        }
    }
    Ok((n, len))
}

fn check_assignment(frames: &[FusionFrame], len: usize, a: &Assignment) -> Result<()> {
    if a.len() != len {
        return Err(FrameError::LengthMismatch {
            expected: len,
            found: a.len(),
        });
    }
    if let Some(&bad) = a.labels.iter().find(|&&l| l >= frames.len()) {
        return Err(FrameError::IndexOutOfRange {
            index: bad,
            len: frames.len(),
        });
    }
    Ok(())
}

/// Member `i` of the weaving is member `i` of frame `labels[i]`, weight included.
pub fn weave(frames: &[FusionFrame], a: &Assignment) -> Result<FusionFrame> {
    let (n, len) = check_frames(frames)?;
    check_assignment(frames, len, a)?;
    let members = a
        .labels
        .iter()
        .enumerate()
        .map(|(i, &j)| frames[j].members()[i].clone())
        .collect();
    FusionFrame::new(n, members)
}

/// Same selection applied to grouped local frames.
pub fn weave_discrete(frames: &[DiscreteFrame], a: &Assignment) -> Result<DiscreteFrame> {
    let first = frames.first().ok_or(FrameError::NoFrames)?;
    let len = first.groups.len();
    for f in frames {
        if f.ambient_dim != first.ambient_dim {
            return Err(FrameError::DimensionMismatch {
                expected: first.ambient_dim,
                found: f.ambient_dim,
            });
        }
        if f.groups.len() != len || a.len() != len {
            return Err(FrameError::LengthMismatch {
                expected: len,
                found: f.groups.len().max(a.len()),
            });
        }
    }
    Ok(DiscreteFrame {
        ambient_dim: first.ambient_dim,
        groups: a
            .labels
            .iter()
            .enumerate()
            .map(|(i, &j)| frames[j].groups[i].clone())
            .collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeavingMode {
    Exhaustive { cap: u64 },
    Sampled { seed: u64, count: usize },
}

impl Default for WeavingMode {
    fn default() -> Self {
        WeavingMode::Exhaustive {
            cap: DEFAULT_ENUM_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeavingEntry {
    pub assignment: Assignment,
    pub bounds: FrameBounds,
    pub is_frame: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeavingReport {
    pub per_assignment: Vec<WeavingEntry>,
    /// Minimum lower bound over the evaluated weavings.
    pub universal_lower: f64,
    /// Maximum upper bound over the evaluated weavings.
    pub universal_upper: f64,
    pub woven: bool,
    pub enumerated: usize,
    /// In sampled mode the universal bounds are only estimates.
    pub sampled: bool,
}

impl WeavingReport {
    fn aggregate(per_assignment: Vec<WeavingEntry>, sampled: bool) -> Self {
        let universal_lower = per_assignment
            .iter()
            .map(|e| e.bounds.lower)
            .fold(f64::INFINITY, f64::min);
        let universal_upper = per_assignment
            .iter()
            .map(|e| e.bounds.upper)
            .fold(f64::NEG_INFINITY, f64::max);
        let woven = per_assignment.iter().all(|e| e.is_frame);
        Self {
            enumerated: per_assignment.len(),
            per_assignment,
            universal_lower,
            universal_upper,
            woven,
            sampled,
        }
    }
}

fn sample_assignments(len: usize, frame_count: usize, seed: u64, count: usize) -> Vec<Assignment> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| Assignment {
            labels: (0..len).map(|_| rng.random_range(0..frame_count)).collect(),
        })
        .collect()
}

fn selected_assignments(
    frames: &[FusionFrame],
    mode: WeavingMode,
) -> Result<(Vec<Assignment>, bool)> {
    let (_, len) = check_frames(frames)?;
    match mode {
        WeavingMode::Exhaustive { cap } => {
            Ok((assignments(len, frames.len(), cap)?.collect(), false))
        }
        WeavingMode::Sampled { seed, count } => {
            Ok((sample_assignments(len, frames.len(), seed, count), true))
        }
    }
}

/// Frame bounds of every (or every sampled) weaving and the universal envelope.
pub fn weaving_report(
    frames: &[FusionFrame],
    tol: &Tolerance,
    mode: WeavingMode,
) -> Result<WeavingReport> {
    let (list, sampled) = selected_assignments(frames, mode)?;
    let entries = list
        .into_iter()
        .map(|assignment| {
            let (bounds, is_frame) = weave(frames, &assignment)?.bounds(tol);
            Ok(WeavingEntry {
                assignment,
                bounds,
                is_frame,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WeavingReport::aggregate(entries, sampled))
}

/// Report over weavings of grouped vector frames; group `i` of the weaving
/// comes from frame `labels[i]`.
pub fn discrete_weaving_report(
    frames: &[DiscreteFrame],
    tol: &Tolerance,
    mode: WeavingMode,
) -> Result<WeavingReport> {
    let first = frames.first().ok_or(FrameError::NoFrames)?;
    let len = first.groups.len();
    let (list, sampled) = match mode {
        WeavingMode::Exhaustive { cap } => (assignments(len, frames.len(), cap)?.collect(), false),
        WeavingMode::Sampled { seed, count } => {
            (sample_assignments(len, frames.len(), seed, count), true)
        }
    };
    let entries = list
        .into_iter()
        .map(|assignment: Assignment| {
            let (bounds, is_frame) = weave_discrete(frames, &assignment)?.bounds(tol);
            Ok(WeavingEntry {
                assignment,
                bounds,
                is_frame,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WeavingReport::aggregate(entries, sampled))
}

/// Whether every weaving is a fusion frame, stopping at the first failure.
pub fn is_weakly_woven(frames: &[FusionFrame], tol: &Tolerance, cap: u64) -> Result<bool> {
    let (_, len) = check_frames(frames)?;
    for a in assignments(len, frames.len(), cap)? {
        if !weave(frames, &a)?.is_frame(tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sum of the upper bounds of the individual frames, a Bessel bound for every weaving.
pub fn bessel_envelope(frames: &[FusionFrame], tol: &Tolerance) -> f64 {
    frames.iter().map(|f| f.bounds(tol).0.upper).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RieszWeavingEntry {
    /// Indices taken from the first family; the rest come from the second.
    pub sigma: Vec<usize>,
    pub bounds: FrameBounds,
    pub is_riesz_sequence: bool,
    pub rank: usize,
    pub is_riesz_basis: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RieszWeavingReport {
    pub entries: Vec<RieszWeavingEntry>,
    pub all_riesz_sequences: bool,
    pub all_riesz_bases: bool,
}

/// Riesz verdicts for `{W_i}_{i∈σ} ∪ {V_i}_{i∉σ}` over every `σ`.
pub fn riesz_weaving_report(
    w: &FusionFrame,
    v: &FusionFrame,
    tol: &Tolerance,
) -> Result<RieszWeavingReport> {
    let frames = [w.clone(), v.clone()];
    let (n, len) = check_frames(&frames)?;
    for f in &frames {
        if let Some((index, m)) = f
            .members()
            .iter()
            .enumerate()
            .find(|(_, m)| m.weight != 1.0)
        {
            return Err(FrameError::NonUniformWeights {
                index,
                weight: m.weight,
            });
        }
    }
    let mut entries = Vec::new();
    for a in assignments(len, 2, DEFAULT_ENUM_CAP)? {
        let woven = weave(&frames, &a)?;
        let subspaces = woven.subspaces();
        let (bounds, is_riesz_sequence) = riesz_sequence_bounds(&subspaces, tol)?;
        let cols: Vec<Vector> = subspaces.iter().flat_map(|s| s.basis_vectors()).collect();
        let rank = if cols.is_empty() {
            0
        } else {
            numerical_rank(&Matrix::from_columns(&cols), tol)
        };
        entries.push(RieszWeavingEntry {
            sigma: a.block(0),
            bounds,
            is_riesz_sequence,
            rank,
            is_riesz_basis: is_riesz_sequence && rank == n,
        });
    }
    Ok(RieszWeavingReport {
        all_riesz_sequences: entries.iter().all(|e| e.is_riesz_sequence),
        all_riesz_bases: entries.iter().all(|e| e.is_riesz_basis),
        entries,
    })
}

/// `W_i = U N_i` and `V_i = (U^{-1})^T N_i` for an orthonormal fusion basis `N`.
/// Then `W_i ⊥ V_j` whenever `i != j`.
pub fn construct_biorthogonal_riesz(
    u: &Matrix,
    basis: &[Subspace],
    tol: &Tolerance,
) -> Result<(FusionFrame, FusionFrame)> {
    let first = basis.first().ok_or(FrameError::LengthMismatch {
        expected: 1,
        found: 0,
    })?;
    let n = first.ambient_dim();
    let u_inv = checked_inverse(u, tol)?;
    if u.nrows() != n {
        return Err(FrameError::DimensionMismatch {
            expected: n,
            found: u.nrows(),
        });
    }
    let frame_n = FusionFrame::uniform(n, basis.to_vec())?;
    if !frame_n.is_orthonormal_fusion_basis(tol) {
        return Err(FrameError::NotOrthonormalBasis);
    }
    let dual_map = u_inv.transpose();
    let w = basis
        .iter()
        .map(|s| s.apply(u, tol))
        .collect::<Result<Vec<_>>>()?;
    let v = basis
        .iter()
        .map(|s| s.apply(&dual_map, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok((FusionFrame::uniform(n, w)?, FusionFrame::uniform(n, v)?))
}

/// Largest `||P_{W_i} P_{V_j}||` over `i != j`.
pub fn max_cross_projection(w: &FusionFrame, v: &FusionFrame) -> f64 {
    let mut worst = 0.0_f64;
    for (i, a) in w.members().iter().enumerate() {
        for (j, b) in v.members().iter().enumerate() {
            if i != j {
                let cross = a.subspace.basis().transpose() * b.subspace.basis();
                worst = worst.max(operator_norm(&cross));
            }
        }
    }
    worst
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeRecord {
    pub original: WeavingReport,
    pub transformed: WeavingReport,
    pub norm: f64,
    pub inverse_norm: f64,
    /// `C' >= C / (||T^{-1}||^2 ||T||^2) - 1e-9`
    pub lower_ok: bool,
    /// `D' <= D ||T^{-1}||^2 ||T||^2 + 1e-9`
    pub upper_ok: bool,
}

impl EnvelopeRecord {
    pub fn condition_squared(&self) -> f64 {
        (self.norm * self.inverse_norm).powi(2)
    }
}

/// Applies an invertible `T` to every subspace of every frame and compares
/// the universal bounds before and after against the condition-number envelope.
pub fn transform_frames(
    t: &Matrix,
    frames: &[FusionFrame],
    tol: &Tolerance,
) -> Result<(Vec<FusionFrame>, EnvelopeRecord)> {
    let (n, _) = check_frames(frames)?;
    if t.nrows() != n || t.ncols() != n {
        return Err(FrameError::DimensionMismatch {
            expected: n,
            found: t.nrows(),
        });
    }
    let t_inv = checked_inverse(t, tol)?;
    let transformed = frames
        .iter()
        .map(|f| transform_frame(t, f, tol))
        .collect::<Result<Vec<_>>>()?;
    let original = weaving_report(frames, tol, WeavingMode::default())?;
    let after = weaving_report(&transformed, tol, WeavingMode::default())?;
    let norm = operator_norm(t);
    let inverse_norm = operator_norm(&t_inv);
    let kappa2 = (norm * inverse_norm).powi(2);
    let record = EnvelopeRecord {
        lower_ok: after.universal_lower >= original.universal_lower / kappa2 - 1e-9,
        upper_ok: after.universal_upper <= original.universal_upper * kappa2 + 1e-9,
        original,
        transformed: after,
        norm,
        inverse_norm,
    };
    Ok((transformed, record))
}

/// `{(T W_i, w_i)}`.
pub fn transform_frame(t: &Matrix, f: &FusionFrame, tol: &Tolerance) -> Result<FusionFrame> {
    let members = f
        .members()
        .iter()
        .map(|m| {
            Ok(crate::frame::WeightedSubspace {
                subspace: m.subspace.apply(t, tol)?,
                weight: m.weight,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    FusionFrame::new(t.nrows(), members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn coords(n: usize) -> FusionFrame {
        FusionFrame::uniform(n, (0..n).map(|i| Subspace::coordinate(n, &[i])).collect()).unwrap()
    }

    fn remark_v() -> FusionFrame {
        FusionFrame::uniform(
            3,
            vec![
                Subspace::coordinate(3, &[0, 1]),
                Subspace::coordinate(3, &[1]),
                Subspace::coordinate(3, &[2]),
            ],
        )
        .unwrap()
    }

    fn swapped() -> FusionFrame {
        FusionFrame::uniform(
            2,
            vec![Subspace::coordinate(2, &[1]), Subspace::coordinate(2, &[0])],
        )
        .unwrap()
    }

    #[test]
    fn assignment_counts_and_order() {
        assert_eq!(assignments(3, 2, DEFAULT_ENUM_CAP).unwrap().count(), 8);
        assert_eq!(assignments(2, 3, DEFAULT_ENUM_CAP).unwrap().count(), 9);
        assert_eq!(assignments(1, 1, DEFAULT_ENUM_CAP).unwrap().count(), 1);
        let all: Vec<String> = assignments(2, 2, DEFAULT_ENUM_CAP)
            .unwrap()
            .map(|a| a.to_string())
            .collect();
        assert_eq!(all, ["1-1", "1-2", "2-1", "2-2"]);
        assert!(matches!(
            assignments(21, 2, DEFAULT_ENUM_CAP),
            Err(FrameError::EnumerationTooLarge { .. })
        ));
        assert!(assignments(20, 2, DEFAULT_ENUM_CAP).is_ok());
    }

    #[test]
    fn weave_examples() {
        let t = tol();
        let frames = [coords(3), remark_v()];
        let all_v = Assignment::from_one_based(&[2, 2, 2], 2).unwrap();
        assert_eq!(weave(&frames, &all_v).unwrap(), remark_v());

        let a = Assignment::from_one_based(&[2, 1, 1], 2).unwrap();
        assert_relative_eq!(
            weave(&frames, &a).unwrap().frame_operator(),
            Matrix::from_diagonal(&Vector::from_vec(vec![1., 2., 1.]))
        );
        let a = Assignment::from_one_based(&[1, 2, 2], 2).unwrap();
        let (b, ok) = weave(&frames, &a).unwrap().bounds(&t);
        assert!(ok);
        assert_eq!((b.lower, b.upper), (1.0, 1.0));

        assert!(Assignment::from_one_based(&[0, 1], 2).is_err());
        assert!(Assignment::new(vec![2], 2).is_err());
        let short = Assignment::new(vec![0, 1], 2).unwrap();
        assert!(matches!(
            weave(&frames, &short),
            Err(FrameError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn weights_travel_with_subspaces() {
        let heavy = FusionFrame::new(
            2,
            vec![
                crate::frame::WeightedSubspace::new(Subspace::coordinate(2, &[0]), 3.0).unwrap(),
                crate::frame::WeightedSubspace::new(Subspace::coordinate(2, &[1]), 3.0).unwrap(),
            ],
        )
        .unwrap();
        let a = Assignment::from_one_based(&[2, 1], 2).unwrap();
        let w = weave(&[coords(2), heavy], &a).unwrap();
        assert_eq!(w.weights(), vec![3.0, 1.0]);
    }

    #[test]
    fn remark_report() {
        let t = tol();
        let r = weaving_report(&[coords(3), remark_v()], &t, WeavingMode::default()).unwrap();
        assert!(r.woven);
        assert!(!r.sampled);
        assert_eq!(r.enumerated, 8);
        assert_relative_eq!(r.universal_lower, 1.0, epsilon = 1e-10);
        assert_relative_eq!(r.universal_upper, 2.0, epsilon = 1e-10);
        assert!(is_weakly_woven(&[coords(3), remark_v()], &t, DEFAULT_ENUM_CAP).unwrap());
    }

    #[test]
    fn same_frame_twice() {
        let t = tol();
        let f = remark_v();
        let r = weaving_report(&[f.clone(), f.clone()], &t, WeavingMode::default()).unwrap();
        let (b, _) = f.bounds(&t);
        assert_eq!((r.universal_lower, r.universal_upper), (b.lower, b.upper));
    }

    #[test]
    fn swapped_coordinates_are_not_woven() {
        let t = tol();
        let frames = [coords(2), swapped()];
        let r = weaving_report(&frames, &t, WeavingMode::default()).unwrap();
        assert!(!r.woven);
        let bad = &r.per_assignment[1];
        assert_eq!(bad.assignment.to_string(), "1-2");
        assert_eq!(bad.bounds.lower, 0.0);
        assert!(!is_weakly_woven(&frames, &t, DEFAULT_ENUM_CAP).unwrap());
        assert_eq!(
            is_weakly_woven(&[remark_v()], &t, DEFAULT_ENUM_CAP).unwrap(),
            remark_v().is_frame(&t)
        );
    }

    #[test]
    fn sampled_mode_is_deterministic() {
        let t = tol();
        let frames = [coords(3), remark_v()];
        let mode = WeavingMode::Sampled { seed: 7, count: 5 };
        let a = weaving_report(&frames, &t, mode).unwrap();
        let b = weaving_report(&frames, &t, mode).unwrap();
        assert_eq!(a, b);
        assert!(a.sampled);
        assert_eq!(a.enumerated, 5);
    }

    #[test]
    fn riesz_weaving_examples() {
        let t = tol();
        let r = riesz_weaving_report(&coords(3), &coords(3), &t).unwrap();
        assert!(r.all_riesz_bases);
        assert_eq!(r.entries.len(), 8);
        let r = riesz_weaving_report(&coords(3), &remark_v(), &t).unwrap();
        assert!(!r.all_riesz_sequences);
        let sigma3 = r.entries.iter().find(|e| e.sigma == vec![2]).unwrap();
        assert!(!sigma3.is_riesz_sequence);
        assert!(sigma3.bounds.lower < 1e-12);

        let weighted = FusionFrame::new(
            2,
            vec![crate::frame::WeightedSubspace::new(Subspace::full(2), 2.0).unwrap()],
        )
        .unwrap();
        let single = FusionFrame::uniform(2, vec![Subspace::full(2)]).unwrap();
        assert!(matches!(
            riesz_weaving_report(&single, &weighted, &t),
            Err(FrameError::NonUniformWeights { .. })
        ));
    }

    #[test]
    fn biorthogonal_examples() {
        let t = tol();
        let n = coords(2).subspaces();
        let (w, v) = construct_biorthogonal_riesz(&Matrix::identity(2, 2), &n, &t).unwrap();
        for (a, b) in w
            .members()
            .iter()
            .chain(v.members())
            .zip(n.iter().chain(&n))
        {
            assert!(a.subspace.distance(b).unwrap() < 1e-12);
        }

        let u = Matrix::from_row_slice(2, 2, &[1., 1., 0., 1.]);
        let (w, v) = construct_biorthogonal_riesz(&u, &n, &t).unwrap();
        let span = |x: &[f64]| Subspace::span_of(2, &[Vector::from_column_slice(x)], &t).unwrap();
        assert!(w.members()[0].subspace.distance(&span(&[1., 0.])).unwrap() < 1e-12);
        assert!(w.members()[1].subspace.distance(&span(&[1., 1.])).unwrap() < 1e-12);
        assert!(v.members()[0].subspace.distance(&span(&[1., -1.])).unwrap() < 1e-12);
        assert!(v.members()[1].subspace.distance(&span(&[0., 1.])).unwrap() < 1e-12);
        assert!(max_cross_projection(&w, &v) < 1e-12);
        assert!(riesz_weaving_report(&w, &v, &t).unwrap().all_riesz_bases);

        let d = Matrix::from_diagonal(&Vector::from_vec(vec![1., 2.]));
        let (w, v) = construct_biorthogonal_riesz(&d, &n, &t).unwrap();
        assert!(w.members()[1].subspace.distance(&n[1]).unwrap() < 1e-12);
        assert!(v.members()[0].subspace.distance(&n[0]).unwrap() < 1e-12);

        let singular = Matrix::from_diagonal(&Vector::from_vec(vec![1., 0.]));
        assert!(matches!(
            construct_biorthogonal_riesz(&singular, &n, &t),
            Err(FrameError::SingularOperator { .. })
        ));
        let not_onb = vec![Subspace::coordinate(2, &[0]), span(&[1., 1.])];
        assert!(matches!(
            construct_biorthogonal_riesz(&u, &not_onb, &t),
            Err(FrameError::NotOrthonormalBasis)
        ));
    }

    #[test]
    fn transform_envelope_examples() {
        let t = tol();
        let frames = [coords(2), remark_like_2d()];
        let (_, rec) = transform_frames(&Matrix::identity(2, 2), &frames, &t).unwrap();
        assert_relative_eq!(
            rec.transformed.universal_lower,
            rec.original.universal_lower,
            epsilon = 1e-12
        );
        assert!(rec.lower_ok && rec.upper_ok);

        // scaling leaves every subspace, hence every bound, unchanged
        let (moved, rec) = transform_frames(&(Matrix::identity(2, 2) * 2.0), &frames, &t).unwrap();
        assert_eq!(moved[1].members()[0].subspace.dim(), 2);
        assert_relative_eq!(
            rec.transformed.universal_lower,
            rec.original.universal_lower,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            rec.transformed.universal_upper,
            rec.original.universal_upper,
            epsilon = 1e-12
        );
        assert_relative_eq!(rec.condition_squared(), 1.0, epsilon = 1e-12);
        assert!(rec.lower_ok && rec.upper_ok);

        let shear = Matrix::from_row_slice(2, 2, &[1., 1., 0., 1.]);
        let (moved, rec) = transform_frames(&shear, &frames, &t).unwrap();
        let direct = weaving_report(&moved, &t, WeavingMode::default()).unwrap();
        assert_eq!(direct, rec.transformed);
        assert!(rec.lower_ok && rec.upper_ok);
    }

    fn remark_like_2d() -> FusionFrame {
        FusionFrame::uniform(2, vec![Subspace::full(2), Subspace::coordinate(2, &[1])]).unwrap()
    }
}
