//! Skew-symmetric (antisymmetric) matrices and their Pfaffians.
//!
//! Three routes to the Pfaffian are provided, deliberately independent of
//! each other so they can cross-check one another:
//!
//! * [`pf_enumerate`] — the definition: a signed sum over perfect matchings.
//!   Exact over rationals, guarded to dimension 12.
//! * [`pf_expand`] — recursive expansion along a row. Exact over rationals,
//!   unguarded (cost grows as the double factorial).
//! * [`pf_stable`] — O(dim³) congruence reduction to skew tridiagonal form
//!   with partial pivoting, `f64` only.
//!
//! [`pf_sum_expand`] evaluates the Pfaffian of a sum of two skew matrices
//! through the subset decomposition formula, and [`pf`] dispatches between
//! the exact expansion and the stable reduction by dimension.

mod algorithms;
mod matrix;
mod pairing;

pub use algorithms::{pf, pf_enumerate, pf_expand, pf_stable, pf_sum_expand};
pub use matrix::{Ring, SkewMatrix};
pub use pairing::{crossing_sign, Pairing};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PfaffianError {
    #[error("Pfaffian requires an even dimension, got {0}")]
    OddDimension(usize),
    #[error("dimension {dim} exceeds the limit {max} for this algorithm")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("matrix is not antisymmetric: {0}")]
    NotAntisymmetric(String),
    #[error("invalid pairing: {0}")]
    InvalidPairing(String),
}
