//! Monte Carlo engine for instantly coalescing/annihilating Brownian
//! particles: bridge-corrected stepping, deterministic replicate-parallel
//! runs, thinning, entrance-law approximation and statistical estimators.

mod engine;
mod estimator;
mod experiments;
mod stats;
mod system;

pub use engine::{run, run_map, simulate_replicates, step, RunConfig};
pub use estimator::{estimate, evaluate_event, EstimatorResult, Event, Welford};
pub use experiments::{
    duality_check, entrance_density_experiment, scaling_invariance_check,
    thinning_relation_check, DualityCheck, DualityKind, EntranceReport, PairBin,
};
pub use stats::{chi_square_two_sample, ChiSquareTwoSample};
pub use system::{in_span, init, thin, InitialCondition, ParticleSystem};

use crate::points::PointsError;
use crate::Model;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimulateError {
    #[error("window [{lo}, {hi}] is empty")]
    EmptyWindow { lo: f64, hi: f64 },
    #[error("step size must be positive, got {0}")]
    NonpositiveStep(f64),
    #[error("probability must lie in [0, 1], got {0}")]
    InvalidProbability(f64),
    #[error("at least one replicate is required")]
    NoReplicates,
    #[error("even particle count required, got {0}")]
    OddCount(usize),
    #[error("operation requires the {expected} model, system is {got}")]
    WrongModel { expected: Model, got: Model },
    #[error("buffer {buffer} is below the minimum {required} for this horizon")]
    InsufficientBuffer { buffer: f64, required: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Points(#[from] PointsError),
}
