use crate::Model;

use super::engine::{run_map, RunConfig};
use super::system::{in_span, InitialCondition, ParticleSystem};
use super::SimulateError;

/// Numerically stable single-pass mean/variance accumulator with an
/// associative merge, so partial results can be combined in any grouping
/// (replicate order is fixed by the caller for bitwise reproducibility).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Welford {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    pub fn new() -> Self {
        Welford::default()
    }

    pub fn push(&mut self, value: f64) {
        self.count += 1;
        let delta = value - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (value - self.mean);
    }

    /// Merges another accumulator (Chan's parallel update).
    pub fn merge(&mut self, other: &Welford) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n1 = self.count as f64;
        let n2 = other.count as f64;
        let delta = other.mean - self.mean;
        let total = n1 + n2;
        self.mean += delta * n2 / total;
        self.m2 += other.m2 + delta * delta * n1 * n2 / total;
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance; 0 below two observations.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    /// Standard error of the mean.
    pub fn stderr(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }
}

/// One estimated quantity with its uncertainty and, when available, the
/// closed-form prediction it is checked against.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorResult {
    pub name: String,
    pub estimate: f64,
    pub stderr: f64,
    pub n_reps: u64,
    pub predicted: Option<f64>,
    pub z_score: Option<f64>,
}

impl EstimatorResult {
    pub fn from_welford(name: impl Into<String>, w: &Welford, predicted: Option<f64>) -> Self {
        let stderr = w.stderr();
        let z_score = match predicted {
            Some(p) if stderr > 0.0 => Some((w.mean() - p) / stderr),
            _ => None,
        };
        EstimatorResult {
            name: name.into(),
            estimate: w.mean(),
            stderr,
            n_reps: w.count(),
            predicted,
            z_score,
        }
    }
}

/// Event functional evaluated on the final state of each replicate.
pub enum Event<'a> {
    /// 1 if the 1st, 3rd, … intervals between consecutive endpoint pairs
    /// contain no particle.
    EmptyIntervals(&'a [f64]),
    /// `(−1)^{N(I_1 ∪ I_3 ∪ …)}` over the same intervals.
    Parity(&'a [f64]),
    /// Number of particles in the open interval.
    Count { lo: f64, hi: f64 },
    /// `Π_i g(X_i)` over the remaining particles; empty product is 1.
    ProductG(&'a (dyn Fn(f64) -> f64 + Sync)),
    /// 1 if the system emptied by the given time.
    ExtinctBy(f64),
}

fn odd_intervals(endpoints: &[f64]) -> impl Iterator<Item = (f64, f64)> + '_ {
    endpoints.chunks_exact(2).map(|pair| (pair[0], pair[1]))
}

/// Evaluates the event functional on one final state.
pub fn evaluate_event(event: &Event, sys: &ParticleSystem) -> f64 {
    match event {
        Event::EmptyIntervals(endpoints) => {
            let occupied = sys.positions().iter().any(|&x| {
                odd_intervals(endpoints).any(|(lo, hi)| lo < x && x < hi)
            });
            if occupied {
                0.0
            } else {
                1.0
            }
        }
        Event::Parity(endpoints) => {
            let n = sys
                .positions()
                .iter()
                .filter(|&&x| odd_intervals(endpoints).any(|(lo, hi)| lo < x && x < hi))
                .count();
            if n % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        }
        Event::Count { lo, hi } => sys
            .positions()
            .iter()
            .filter(|&&x| *lo < x && x < *hi)
            .count() as f64,
        Event::ProductG(g) => sys.positions().iter().map(|&x| g(x)).product(),
        Event::ExtinctBy(t) => match sys.extinct_at() {
            Some(tau) if tau <= *t => 1.0,
            _ => 0.0,
        },
    }
}

/// Runs the replicates and accumulates the event functional, attaching the
/// prediction when one is supplied.
///
/// Per-replicate values are reduced by merging fixed-size chunk
/// accumulators in replicate order, so the result does not depend on the
/// worker count.
pub fn estimate(
    name: &str,
    event: &Event,
    ic: &InitialCondition,
    model: Model,
    cfg: &RunConfig,
    predicted: Option<f64>,
) -> Result<EstimatorResult, SimulateError> {
    let values = run_map(ic, model, cfg, |sys| evaluate_event(event, sys))?;
    Ok(EstimatorResult::from_welford(
        name,
        &accumulate(&values),
        predicted,
    ))
}

/// Chunked associative reduction of raw values in index order.
pub fn accumulate(values: &[f64]) -> Welford {
    const CHUNK: usize = 1024;
    let mut total = Welford::new();
    for chunk in values.chunks(CHUNK) {
        let mut partial = Welford::new();
        for &v in chunk {
            partial.push(v);
        }
        total.merge(&partial);
    }
    total
}

/// 1 when every listed point lies outside the span set of an annihilating
/// system, 0 otherwise.
pub fn span_misses_all(sys: &ParticleSystem, points: &[f64]) -> Result<f64, SimulateError> {
    for &x in points {
        if in_span(sys, x)? {
            return Ok(0.0);
        }
    }
    Ok(1.0)
}

/// `(−1)^{|S_t ∩ points|}` for an annihilating system.
pub fn span_intersection_parity(
    sys: &ParticleSystem,
    points: &[f64],
) -> Result<f64, SimulateError> {
    let mut n = 0usize;
    for &x in points {
        if in_span(sys, x)? {
            n += 1;
        }
    }
    Ok(if n % 2 == 0 { 1.0 } else { -1.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn welford_matches_direct_formulas() {
        let xs = [1.0, 2.0, 4.0, 8.0, 16.5, -3.0];
        let mut w = Welford::new();
        for &x in &xs {
            w.push(x);
        }
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
        assert!((w.mean() - mean).abs() < 1e-14);
        assert!((w.variance() - var).abs() < 1e-13);
        assert!((w.stderr() - (var / n).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn merge_equals_sequential_for_any_split() {
        let xs: Vec<f64> = (0..257).map(|k| ((k * 37 + 11) % 101) as f64 / 7.0).collect();
        let mut reference = Welford::new();
        for &x in &xs {
            reference.push(x);
        }
        for split in [1usize, 2, 31, 128, 255] {
            let (a, b) = xs.split_at(split);
            let mut wa = Welford::new();
            for &x in a {
                wa.push(x);
            }
            let mut wb = Welford::new();
            for &x in b {
                wb.push(x);
            }
            wa.merge(&wb);
            assert_eq!(wa.count(), reference.count());
            assert!((wa.mean() - reference.mean()).abs() < 1e-12);
            assert!((wa.variance() - reference.variance()).abs() < 1e-10);
        }
    }

    #[test]
    fn event_evaluation() {
        let sys = ParticleSystem::from_sorted(
            Model::Annihilating,
            vec![0.5, 2.5, 2.7],
            1.0,
        );
        let endpoints = [0.0, 1.0, 2.0, 3.0];
        assert_eq!(evaluate_event(&Event::EmptyIntervals(&endpoints), &sys), 0.0);
        // three particles inside I_1 ∪ I_3
        assert_eq!(evaluate_event(&Event::Parity(&endpoints), &sys), -1.0);
        assert_eq!(
            evaluate_event(&Event::Count { lo: 2.0, hi: 3.0 }, &sys),
            2.0
        );
        let g = |x: f64| x;
        assert!(
            (evaluate_event(&Event::ProductG(&g), &sys) - 0.5 * 2.5 * 2.7).abs() < 1e-12
        );
        assert_eq!(evaluate_event(&Event::ExtinctBy(1.0), &sys), 0.0);

        let empty = ParticleSystem::from_sorted(Model::Annihilating, vec![], 0.25);
        assert_eq!(evaluate_event(&Event::EmptyIntervals(&endpoints), &empty), 1.0);
        assert_eq!(evaluate_event(&Event::ProductG(&g), &empty), 1.0);
        assert_eq!(evaluate_event(&Event::ExtinctBy(1.0), &empty), 1.0);
        assert_eq!(evaluate_event(&Event::ExtinctBy(0.1), &empty), 0.0);
    }

    #[test]
    fn z_score_attached_when_predicted() {
        let mut w = Welford::new();
        for k in 0..100 {
            w.push(if k % 2 == 0 { 1.0 } else { 0.0 });
        }
        let r = EstimatorResult::from_welford("half", &w, Some(0.5));
        assert_eq!(r.n_reps, 100);
        assert_eq!(r.predicted, Some(0.5));
        assert!(r.z_score.unwrap().abs() < 1e-12);
        let r2 = EstimatorResult::from_welford("bare", &w, None);
        assert_eq!(r2.z_score, None);
    }
}
