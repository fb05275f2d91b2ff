//! Closed-form evaluators: every probability, moment, kernel and asymptotic
//! constant here reduces to the Pfaffian of a structured matrix.

pub mod asymptotic;
pub mod erf_family;
pub mod jmatrix;
pub mod kernel;
pub mod moments;
pub mod patterns;
pub mod quad;
pub mod special;

pub use asymptotic::{
    asymptotic_constant, asymptotic_density, rho_tilde, small_separation_check, vandermonde,
    SeparationCheck,
};
pub use erf_family::{f_family, FFamily};
pub use jmatrix::{j_matrix, phi_taylor_derivative, JMatrix};
pub use kernel::{kernel_k, rho, KernelBlock};
pub use moments::{first_moment, pair_moment, product_moment, TestFunction};
pub use patterns::{pattern_probability, Pattern, PatternSpec};
pub use special::{erf, erfc};

use crate::pfaffian::PfaffianError;
use crate::points::PointsError;
use crate::Model;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormulaError {
    #[error("time must be positive, got {0}")]
    NonpositiveTime(f64),
    #[error("arguments must be strictly ordered: {0} then {1}")]
    UnorderedArguments(f64, f64),
    #[error("pattern `{pattern}` is not defined for the {model} model")]
    UnsupportedPatternModelCombination {
        pattern: &'static str,
        model: Model,
    },
    #[error("adaptive quadrature failed to converge")]
    QuadratureNonConvergence,
    #[error("point count {dim} exceeds the limit {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("point count must be even, got {0}")]
    OddPointCount(usize),
    #[error("points degenerate after scaling")]
    DegeneratePoints,
    #[error(transparent)]
    Points(#[from] PointsError),
    #[error(transparent)]
    Pfaffian(#[from] PfaffianError),
}
