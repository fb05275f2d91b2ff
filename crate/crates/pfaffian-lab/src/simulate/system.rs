use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::points::OrderedPoints;
use crate::Model;

use super::SimulateError;

/// State of one particle system: sorted positions, current time and the
/// extinction time if the system has emptied.
///
/// Invariants maintained by every operation: positions strictly increasing,
/// count never increases, annihilating count parity conserved, `extinct_at`
/// set exactly when the position list is empty.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleSystem {
    model: Model,
    positions: Vec<f64>,
    time: f64,
    extinct_at: Option<f64>,
}

impl ParticleSystem {
    pub(crate) fn from_sorted(model: Model, positions: Vec<f64>, time: f64) -> Self {
        debug_assert!(positions.windows(2).all(|w| w[0] < w[1]));
        let extinct_at = if positions.is_empty() { Some(time) } else { None };
        ParticleSystem {
            model,
            positions,
            time,
            extinct_at,
        }
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn count(&self) -> usize {
        self.positions.len()
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// First time at which the system was observed empty, at step resolution.
    pub fn extinct_at(&self) -> Option<f64> {
        self.extinct_at
    }

    pub(crate) fn advance(&mut self, new_positions: Vec<f64>, new_time: f64) {
        debug_assert!(
            new_positions.windows(2).all(|w| w[0] < w[1]),
            "positions must stay strictly increasing"
        );
        debug_assert!(new_positions.len() <= self.positions.len());
        if self.model == Model::Annihilating {
            debug_assert_eq!(new_positions.len() % 2, self.positions.len() % 2);
        }
        self.positions = new_positions;
        self.time = new_time;
        if self.positions.is_empty() && self.extinct_at.is_none() {
            self.extinct_at = Some(new_time);
        }
    }
}

/// How a replicate is populated at time zero.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    /// Particles at the listed positions.
    Explicit(OrderedPoints),
    /// Poisson process of the given intensity on the window.
    Poisson { intensity: f64, window: (f64, f64) },
    /// Regular lattice of the given spacing covering the window, endpoints
    /// included.
    Lattice { spacing: f64, window: (f64, f64) },
}

/// Draws the initial state for one replicate.
pub fn init(
    ic: &InitialCondition,
    model: Model,
    rng: &mut impl Rng,
) -> Result<ParticleSystem, SimulateError> {
    let positions = match ic {
        InitialCondition::Explicit(points) => points.coords().to_vec(),
        InitialCondition::Poisson { intensity, window } => {
            let (lo, hi) = *window;
            if !(hi > lo) {
                return Err(SimulateError::EmptyWindow { lo, hi });
            }
            if !(intensity > &0.0) {
                return Err(SimulateError::InvalidParameter(format!(
                    "Poisson intensity must be positive, got {intensity}"
                )));
            }
            let mean = intensity * (hi - lo);
            let count = Poisson::new(mean)
                .map_err(|e| SimulateError::InvalidParameter(format!("Poisson({mean}): {e}")))?
                .sample(rng) as usize;
            let mut pos: Vec<f64> = (0..count).map(|_| rng.gen_range(lo..hi)).collect();
            pos.sort_by(|a, b| a.partial_cmp(b).unwrap());
            pos.dedup();
            pos
        }
        InitialCondition::Lattice { spacing, window } => {
            let (lo, hi) = *window;
            if !(hi > lo) {
                return Err(SimulateError::EmptyWindow { lo, hi });
            }
            if !(spacing > &0.0) {
                return Err(SimulateError::InvalidParameter(format!(
                    "lattice spacing must be positive, got {spacing}"
                )));
            }
            let mut pos = Vec::new();
            let mut k = 0usize;
            loop {
                let x = lo + k as f64 * spacing;
                if x > hi + 1e-9 * spacing {
                    break;
                }
                pos.push(x);
                k += 1;
            }
            pos
        }
    };
    Ok(ParticleSystem::from_sorted(model, positions, 0.0))
}

/// Independently retains each particle with probability `p`.
pub fn thin(
    sys: &ParticleSystem,
    p: f64,
    rng: &mut impl Rng,
) -> Result<ParticleSystem, SimulateError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(SimulateError::InvalidProbability(p));
    }
    let positions: Vec<f64> = sys
        .positions
        .iter()
        .copied()
        .filter(|_| rng.gen::<f64>() < p)
        .collect();
    Ok(ParticleSystem::from_sorted(sys.model, positions, sys.time))
}

/// Whether `x` lies in the span set: the union of the open intervals
/// between the 1st–2nd, 3rd–4th, … sorted positions.
///
/// Defined for annihilating systems with an even particle count.
pub fn in_span(sys: &ParticleSystem, x: f64) -> Result<bool, SimulateError> {
    if sys.model != Model::Annihilating {
        return Err(SimulateError::WrongModel {
            expected: Model::Annihilating,
            got: sys.model,
        });
    }
    if sys.count() % 2 != 0 {
        return Err(SimulateError::OddCount(sys.count()));
    }
    Ok(sys
        .positions
        .chunks_exact(2)
        .any(|pair| pair[0] < x && x < pair[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, LANE_INIT};

    #[test]
    fn explicit_init() {
        let ic = InitialCondition::Explicit(
            OrderedPoints::new(vec![0.0, 1.0, 2.0, 3.0]).unwrap(),
        );
        let mut rng = stream(1, 0, LANE_INIT);
        let sys = init(&ic, Model::Annihilating, &mut rng).unwrap();
        assert_eq!(sys.positions(), &[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(sys.time(), 0.0);
        assert_eq!(sys.extinct_at(), None);
    }

    #[test]
    fn lattice_init() {
        let ic = InitialCondition::Lattice {
            spacing: 0.5,
            window: (0.0, 2.0),
        };
        let mut rng = stream(1, 0, LANE_INIT);
        let sys = init(&ic, Model::Coalescing, &mut rng).unwrap();
        assert_eq!(sys.positions(), &[0.0, 0.5, 1.0, 1.5, 2.0]);
    }

    #[test]
    fn poisson_mean_count() {
        let ic = InitialCondition::Poisson {
            intensity: 10.0,
            window: (0.0, 10.0),
        };
        let reps = 10_000u64;
        let mut total = 0usize;
        for r in 0..reps {
            let mut rng = stream(99, r, LANE_INIT);
            total += init(&ic, Model::Coalescing, &mut rng).unwrap().count();
        }
        let mean = total as f64 / reps as f64;
        // mean 100, var 100: three sigma of the sample mean is 0.3
        assert!((mean - 100.0).abs() < 3.0 * (100.0f64 / reps as f64).sqrt(), "{mean}");
    }

    #[test]
    fn init_validation() {
        let mut rng = stream(1, 0, LANE_INIT);
        let bad = InitialCondition::Poisson {
            intensity: 10.0,
            window: (1.0, 1.0),
        };
        assert!(matches!(
            init(&bad, Model::Coalescing, &mut rng),
            Err(SimulateError::EmptyWindow { .. })
        ));
        let bad = InitialCondition::Lattice {
            spacing: 0.0,
            window: (0.0, 1.0),
        };
        assert!(matches!(
            init(&bad, Model::Coalescing, &mut rng),
            Err(SimulateError::InvalidParameter(_))
        ));
    }

    #[test]
    fn thinning_edge_probabilities() {
        let sys = ParticleSystem::from_sorted(
            Model::Coalescing,
            vec![0.0, 1.0, 2.0],
            0.5,
        );
        let mut rng = stream(2, 0, LANE_INIT);
        let kept = thin(&sys, 1.0, &mut rng).unwrap();
        assert_eq!(kept.positions(), sys.positions());
        let none = thin(&sys, 0.0, &mut rng).unwrap();
        assert_eq!(none.count(), 0);
        assert_eq!(none.extinct_at(), Some(0.5));
        assert!(thin(&sys, 1.5, &mut rng).is_err());
    }

    #[test]
    fn thinning_parity_is_centred() {
        // E[(−1)^{B(n,1/2)}] = 0
        let sys = ParticleSystem::from_sorted(
            Model::Annihilating,
            (0..10).map(|k| k as f64).collect(),
            0.0,
        );
        let reps = 20_000u64;
        let mut sum = 0.0;
        for r in 0..reps {
            let mut rng = stream(7, r, crate::rng::LANE_THINNING);
            let kept = thin(&sys, 0.5, &mut rng).unwrap().count();
            sum += if kept % 2 == 0 { 1.0 } else { -1.0 };
        }
        let mean = sum / reps as f64;
        // variance of ±1 is 1; three sigma
        assert!(mean.abs() < 3.0 / (reps as f64).sqrt(), "{mean}");
    }

    #[test]
    fn span_membership() {
        let sys = ParticleSystem::from_sorted(
            Model::Annihilating,
            vec![0.0, 1.0, 2.0, 3.0],
            0.0,
        );
        assert!(in_span(&sys, 0.5).unwrap());
        assert!(!in_span(&sys, 1.5).unwrap());
        assert!(in_span(&sys, 2.5).unwrap());
        assert!(!in_span(&sys, -1.0).unwrap());

        let empty = ParticleSystem::from_sorted(Model::Annihilating, vec![], 0.0);
        assert!(!in_span(&empty, 0.0).unwrap());

        let odd = ParticleSystem::from_sorted(Model::Annihilating, vec![0.0], 0.0);
        assert!(matches!(in_span(&odd, 0.0), Err(SimulateError::OddCount(1))));

        let coal = ParticleSystem::from_sorted(Model::Coalescing, vec![0.0, 1.0], 0.0);
        assert!(matches!(
            in_span(&coal, 0.5),
            Err(SimulateError::WrongModel { .. })
        ));
    }
}
