//! Finite-dimensional fusion frames and weaving.
//!
//! Subspaces of `R^n` are stored through orthonormal bases, fusion frames as
//! ordered weighted families of them. On top of that the crate computes
//! frame operators, optimal bounds, duals, Riesz verdicts, weaving reports
//! and the operator-perturbation checks.

pub mod error;
pub mod frame;
pub mod numeric;
pub mod perturbation;
pub mod random;
pub mod subspace;
pub mod weaving;

pub use error::{FrameError, Result};
pub use frame::{
    approx_dual_defect, is_approximate_dual, is_dual, mixed_frame_operator, riesz_sequence_bounds,
    riesz_witness, DiscreteFrame, FrameBounds, FusionFrame, WeightedSubspace,
};
pub use numeric::{Matrix, Tolerance, Vector};
pub use subspace::Subspace;
pub use weaving::{weave, weaving_report, Assignment, WeavingMode, WeavingReport};
