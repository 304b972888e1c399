//! Seeded generators for random operators, subspaces and frames.

use nalgebra::QR;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::frame::{FusionFrame, WeightedSubspace};
use crate::numeric::{Matrix, Tolerance, Vector};
use crate::subspace::Subspace;

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

pub fn gaussian_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vector {
    Vector::from_fn(n, |_, _| rng.sample(StandardNormal))
}

pub fn unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vector {
    loop {
        let v = gaussian_vector(n, rng);
        let norm = v.norm();
        if norm > 1e-6 {
            return v / norm;
        }
    }
}

/// Haar-distributed orthogonal matrix.
pub fn orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    let qr = QR::new(gaussian_matrix(n, n, rng));
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// `Q1 diag(s) Q2` with singular values in `[1, max_cond]`, so the
/// condition number never exceeds `max_cond`.
pub fn invertible<R: Rng + ?Sized>(n: usize, max_cond: f64, rng: &mut R) -> Matrix {
    let log_max = max_cond.max(1.0).ln();
    let s = Vector::from_fn(n, |i, _| {
        if i == 0 {
            1.0
        } else {
            rng.random_range(0.0..=log_max).exp()
        }
    });
    orthogonal(n, rng) * Matrix::from_diagonal(&s) * orthogonal(n, rng)
}

/// Square matrix of exact rank `rank` with nonzero singular values in `[0.5, 3]`.
pub fn with_rank<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> Matrix {
    let left = orthogonal(n, rng);
    let right = orthogonal(n, rng);
    let mut s = Vector::zeros(n);
    for i in 0..rank.min(n) {
        s[i] = rng.random_range(0.5..3.0);
    }
    left * Matrix::from_diagonal(&s) * right.transpose()
}

pub fn subspace<R: Rng + ?Sized>(n: usize, dim: usize, rng: &mut R) -> Subspace {
    let q = orthogonal(n, rng);
    Subspace::from_orthonormal(q.columns(0, dim.min(n)).into_owned(), &Tolerance::default())
        .expect("columns of an orthogonal matrix are orthonormal")
}

/// Random block sizes, each at least one, adding up to `n`.
pub fn partition_sizes<R: Rng + ?Sized>(n: usize, parts: usize, rng: &mut R) -> Vec<usize> {
    assert!(parts >= 1 && parts <= n, "need 1 <= parts <= n");
    let mut cuts: Vec<usize> = (1..n).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(parts - 1).collect();
    cuts.sort_unstable();
    let mut sizes = Vec::with_capacity(parts);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(n)) {
        sizes.push(c - prev);
        prev = c;
    }
    sizes
}

/// Coordinate blocks of `R^n` with the given sizes.
pub fn coordinate_blocks(n: usize, sizes: &[usize]) -> Vec<Subspace> {
    let mut start = 0;
    sizes
        .iter()
        .map(|&k| {
            let idx: Vec<usize> = (start..start + k).collect();
            start += k;
            Subspace::coordinate(n, &idx)
        })
        .collect()
}

/// Orthonormal fusion basis `Q E_i` for random orthogonal `Q` and random blocks.
pub fn orthonormal_fusion_basis<R: Rng + ?Sized>(
    n: usize,
    parts: usize,
    rng: &mut R,
) -> Vec<Subspace> {
    let q = orthogonal(n, rng);
    let sizes = partition_sizes(n, parts, rng);
    let tol = Tolerance::default();
    coordinate_blocks(n, &sizes)
        .iter()
        .map(|s| s.apply(&q, &tol).expect("square operator"))
        .collect()
}

/// A 1-uniform fusion Riesz basis `U N_i` with `cond(U) <= max_cond`,
/// returned together with `U` and the coordinate blocks `N_i`.
pub fn riesz_basis<R: Rng + ?Sized>(
    n: usize,
    parts: usize,
    max_cond: f64,
    rng: &mut R,
) -> (FusionFrame, Matrix, Vec<Subspace>) {
    let u = invertible(n, max_cond, rng);
    let sizes = partition_sizes(n, parts, rng);
    let blocks = coordinate_blocks(n, &sizes);
    let tol = Tolerance::default();
    let members = blocks
        .iter()
        .map(|b| b.apply(&u, &tol).expect("square operator"))
        .collect();
    (
        FusionFrame::uniform(n, members).expect("members share the ambient dimension"),
        u,
        blocks,
    )
}

/// Same subspaces with weights drawn from `[lo, hi)`.
pub fn reweight<R: Rng + ?Sized>(f: &FusionFrame, lo: f64, hi: f64, rng: &mut R) -> FusionFrame {
    let members = f
        .members()
        .iter()
        .map(|m| WeightedSubspace {
            subspace: m.subspace.clone(),
            weight: rng.random_range(lo..hi),
        })
        .collect();
    FusionFrame::new(f.ambient_dim(), members).expect("weights are positive")
}

/// Random weighted fusion frame with `count` members of random dimension.
/// Resamples until the family is a frame with lower bound above `1e-3`.
pub fn fusion_frame<R: Rng + ?Sized>(n: usize, count: usize, rng: &mut R) -> FusionFrame {
    assert!(n >= 1 && count >= 1);
    let tol = Tolerance::default();
    loop {
        let members = (0..count)
            .map(|_| {
                let dim = rng.random_range(1..=n);
                WeightedSubspace {
                    subspace: subspace(n, dim, rng),
                    weight: rng.random_range(0.5..2.0),
                }
            })
            .collect();
        let f = FusionFrame::new(n, members).expect("valid members");
        if f.bounds(&tol).0.lower > 1e-3 {
            return f;
        }
    }
}
