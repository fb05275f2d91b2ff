//! Skew-symmetric linear algebra, closed-form Pfaffian kernels, and Monte
//! Carlo machinery for one-dimensional coalescing/annihilating Brownian
//! particle systems and the real Ginibre ensemble.
//!
//! The crate is organised around four subsystems:
//!
//! * [`pfaffian`] — Pfaffian algorithms over `f64` and exact rationals.
//! * [`formulas`] — closed-form densities, pattern probabilities, product
//!   moments and large-time asymptotics, all reducing to Pfaffians of
//!   structured matrices.
//! * [`simulate`] — replicate-parallel particle simulation with
//!   bridge-corrected collision detection and statistical estimators.
//! * [`ginibre`] — real Ginibre sampling and real-eigenvalue statistics.
//!
//! Everything is deterministic given a master seed: all randomness flows
//! through [`rng`] streams keyed by `(seed, replicate, lane)`.

pub mod formulas;
pub mod ginibre;
pub mod oracles;
pub mod pfaffian;
pub mod points;
pub mod rng;
pub mod simulate;

pub use points::OrderedPoints;

/// Reaction rule applied when two particles collide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// Colliding particles merge into a single particle.
    Coalescing,
    /// Colliding particles annihilate each other.
    Annihilating,
}

impl Model {
    pub fn as_str(&self) -> &'static str {
        match self {
            Model::Coalescing => "coalescing",
            Model::Annihilating => "annihilating",
        }
    }
}

impl std::str::FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "coalescing" | "coal" => Ok(Model::Coalescing),
            "annihilating" | "ann" => Ok(Model::Annihilating),
            other => Err(format!("unknown model `{other}`")),
        }
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}
