//! Paired Monte Carlo experiments: duality cross-checks, entrance-law
//! density runs, the thinning relation and the diffusive scaling check.

use std::collections::BTreeMap;

use crate::formulas::{self, quad};
use crate::points::OrderedPoints;
use crate::rng::{self, LANE_THINNING};
use crate::Model;

use super::engine::{simulate_replicates, RunConfig};
use super::estimator::{
    accumulate, evaluate_event, span_intersection_parity, span_misses_all, EstimatorResult,
    Event,
};
use super::stats::{chi_square_two_sample, ChiSquareTwoSample};
use super::system::{init, thin, InitialCondition};
use super::SimulateError;

/// Which of the two duality identities to exercise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualityKind {
    /// Coalescing empty intervals vs annihilating span avoidance.
    EmptyInterval,
    /// Annihilating interval parity vs span-intersection parity.
    Parity,
}

/// Both sides of a duality identity with the z-score of their difference.
#[derive(Debug, Clone, PartialEq)]
pub struct DualityCheck {
    pub left: EstimatorResult,
    pub right: EstimatorResult,
    pub z_diff: f64,
}

/// Estimates both sides of the chosen duality identity with independent
/// replicate streams and returns the discrepancy z-score.
///
/// Left side: the forward system started from `forward_ic`, observed through
/// the intervals of `dual_endpoints`. Right side: the annihilating system
/// started from `dual_endpoints`, observed through its span set at the
/// points of `forward_ic`.
pub fn duality_check(
    kind: DualityKind,
    forward_ic: &OrderedPoints,
    dual_endpoints: &OrderedPoints,
    t: f64,
    cfg: &RunConfig,
) -> Result<DualityCheck, SimulateError> {
    if dual_endpoints.len() % 2 != 0 {
        return Err(SimulateError::OddCount(dual_endpoints.len()));
    }
    let mut left_cfg = cfg.with_horizon(t);
    left_cfg.master_seed = rng::derive_seed(cfg.master_seed, 1);
    let mut right_cfg = cfg.with_horizon(t);
    right_cfg.master_seed = rng::derive_seed(cfg.master_seed, 2);

    let endpoints = dual_endpoints.coords();
    let forward_points = forward_ic.coords();

    let (left_model, left_name, right_name) = match kind {
        DualityKind::EmptyInterval => (
            Model::Coalescing,
            "duality-empty/forward",
            "duality-empty/dual",
        ),
        DualityKind::Parity => (Model::Annihilating, "duality-parity/forward", "duality-parity/dual"),
    };

    let forward = InitialCondition::Explicit(forward_ic.clone());
    let left_values = simulate_replicates(
        &left_cfg,
        |_, rng| init(&forward, left_model, rng),
        |_, sys| {
            Ok(match kind {
                DualityKind::EmptyInterval => evaluate_event(&Event::EmptyIntervals(endpoints), sys),
                DualityKind::Parity => evaluate_event(&Event::Parity(endpoints), sys),
            })
        },
    )?;

    let dual = InitialCondition::Explicit(dual_endpoints.clone());
    let right_values = simulate_replicates(
        &right_cfg,
        |_, rng| init(&dual, Model::Annihilating, rng),
        |_, sys| match kind {
            DualityKind::EmptyInterval => span_misses_all(sys, forward_points),
            DualityKind::Parity => span_intersection_parity(sys, forward_points),
        },
    )?;

    let left = EstimatorResult::from_welford(left_name, &accumulate(&left_values), None);
    let right = EstimatorResult::from_welford(right_name, &accumulate(&right_values), None);
    let denom = (left.stderr * left.stderr + right.stderr * right.stderr).sqrt();
    let z_diff = if denom > 0.0 {
        (left.estimate - right.estimate) / denom
    } else if left.estimate == right.estimate {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(DualityCheck { left, right, z_diff })
}

/// One bin of the empirical two-point correlation histogram.
#[derive(Debug, Clone, PartialEq)]
pub struct PairBin {
    pub left: f64,
    pub right: f64,
    pub pair_count: u64,
    pub empirical: f64,
    pub predicted: f64,
}

/// Output of the entrance-law experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct EntranceReport {
    /// One-point density on the observation window vs the kernel prediction.
    pub density: EstimatorResult,
    /// Optional interval-pattern estimator from the same runs.
    pub pattern: Option<EstimatorResult>,
    /// Pair-correlation histogram vs the two-point kernel prediction.
    pub pair_bins: Vec<PairBin>,
    pub warnings: Vec<String>,
}

/// Approximates the maximal entrance law by a Poisson initial condition
/// with the configured buffer and measures one- and two-point statistics
/// at time `t` against the kernel predictions.
///
/// Coalescing runs start from Poisson(`intensity`); annihilating runs start
/// from an independent half-thinning of Poisson(2·`intensity`), matching the
/// thinned-coalescing route to the annihilating entrance law.
/// `pattern_endpoints`, when given, additionally estimates the alternate
/// empty-interval probability (coalescing) or interval parity
/// (annihilating) from the same replicates.
pub fn entrance_density_experiment(
    cfg: &RunConfig,
    t: f64,
    model: Model,
    intensity: f64,
    pattern_endpoints: Option<&[f64]>,
) -> Result<EntranceReport, SimulateError> {
    let mut warnings = Vec::new();
    let required = 3.0 * t.sqrt();
    if cfg.buffer < required {
        return Err(SimulateError::InsufficientBuffer {
            buffer: cfg.buffer,
            required,
        });
    }
    if cfg.buffer < 6.0 * t.sqrt() {
        warnings.push(format!(
            "buffer {} is below the recommended {} (6·sqrt(t))",
            cfg.buffer,
            6.0 * t.sqrt()
        ));
    }
    if intensity * t.sqrt() < 10.0 {
        warnings.push(format!(
            "intensity·sqrt(t) = {} is below the recommended 10",
            intensity * t.sqrt()
        ));
    }
    let (wlo, whi) = cfg.observation_window;
    let window_len = whi - wlo;
    let init_window = (wlo - cfg.buffer, whi + cfg.buffer);
    let run_cfg = cfg.with_horizon(t);

    // pair-correlation binning
    let n_bins = 8usize;
    let g_max = 4.0 * t.sqrt();
    let bin_width = g_max / n_bins as f64;

    struct Obs {
        count: u64,
        bins: Vec<u64>,
        pattern: Option<f64>,
    }

    let seed = run_cfg.master_seed;
    let observations = simulate_replicates(
        &run_cfg,
        |r, rng| match model {
            Model::Coalescing => init(
                &InitialCondition::Poisson {
                    intensity,
                    window: init_window,
                },
                model,
                rng,
            ),
            Model::Annihilating => {
                let dense = init(
                    &InitialCondition::Poisson {
                        intensity: 2.0 * intensity,
                        window: init_window,
                    },
                    model,
                    rng,
                )?;
                let mut thin_rng = rng::stream(seed, r, LANE_THINNING);
                thin(&dense, 0.5, &mut thin_rng)
            }
        },
        |_, sys| {
            let xs = sys.positions();
            let count = xs.iter().filter(|&&x| wlo < x && x < whi).count() as u64;
            let mut bins = vec![0u64; n_bins];
            for (i, &xi) in xs.iter().enumerate() {
                if xi <= wlo || xi >= whi {
                    continue;
                }
                for &xj in &xs[i + 1..] {
                    let gap = xj - xi;
                    if gap >= g_max {
                        break;
                    }
                    bins[(gap / bin_width) as usize] += 1;
                }
            }
            let pattern = pattern_endpoints.map(|eps| match model {
                Model::Coalescing => evaluate_event(&Event::EmptyIntervals(eps), sys),
                Model::Annihilating => evaluate_event(&Event::Parity(eps), sys),
            });
            Ok(Obs { count, bins, pattern })
        },
    )?;

    let single = OrderedPoints::new(vec![0.0]).expect("one point");
    let predicted_density = formulas::rho(&single, t, model)
        .map_err(|e| SimulateError::InvalidParameter(e.to_string()))?;
    let densities: Vec<f64> = observations
        .iter()
        .map(|o| o.count as f64 / window_len)
        .collect();
    let density = EstimatorResult::from_welford(
        format!("entrance-density/{model}"),
        &accumulate(&densities),
        Some(predicted_density),
    );

    let pattern = if let Some(eps) = pattern_endpoints {
        let endpoints = OrderedPoints::new(eps.to_vec())?;
        let spec = formulas::PatternSpec::new(
            endpoints,
            formulas::Pattern::AlternateEmpty,
            t,
            model,
        )
        .map_err(|e| SimulateError::InvalidParameter(e.to_string()))?;
        let predicted = formulas::pattern_probability(&spec)
            .map_err(|e| SimulateError::InvalidParameter(e.to_string()))?;
        let values: Vec<f64> = observations.iter().filter_map(|o| o.pattern).collect();
        Some(EstimatorResult::from_welford(
            format!("entrance-pattern/{model}"),
            &accumulate(&values),
            Some(predicted),
        ))
    } else {
        None
    };

    let reps = observations.len() as f64;
    let mut pair_bins = Vec::with_capacity(n_bins);
    for b in 0..n_bins {
        let left = b as f64 * bin_width;
        let right = left + bin_width;
        let pair_count: u64 = observations.iter().map(|o| o.bins[b]).sum();
        let empirical = pair_count as f64 / (reps * window_len * bin_width);
        // bin-averaged two-point prediction; rho is translation invariant
        let predicted = quad::integrate(
            &|g| {
                let pts = OrderedPoints::new(vec![0.0, g]).expect("ordered");
                formulas::rho(&pts, t, model).expect("valid rho arguments")
            },
            left.max(1e-12),
            right,
            1e-10,
        )
        .map_err(|_| SimulateError::InvalidParameter("pair prediction quadrature".into()))?
            / bin_width;
        pair_bins.push(PairBin {
            left,
            right,
            pair_count,
            empirical,
            predicted,
        });
    }

    Ok(EntranceReport {
        density,
        pattern,
        pair_bins,
        warnings,
    })
}

/// Thinning relation check: annihilating runs from a thinned Poisson(2λ)
/// draw versus half-thinned coalescing runs from Poisson(2λ), compared by a
/// chi-square test on the joint interval count vectors.
pub fn thinning_relation_check(
    cfg: &RunConfig,
    t: f64,
    doubled_intensity: f64,
    intervals: &[(f64, f64)],
) -> Result<ChiSquareTwoSample, SimulateError> {
    let (wlo, whi) = cfg.observation_window;
    let init_window = (wlo - cfg.buffer, whi + cfg.buffer);
    let ic = InitialCondition::Poisson {
        intensity: doubled_intensity,
        window: init_window,
    };

    let count_vector = |positions: &[f64]| -> Vec<u8> {
        intervals
            .iter()
            .map(|&(lo, hi)| {
                positions
                    .iter()
                    .filter(|&&x| lo < x && x < hi)
                    .count()
                    .min(255) as u8
            })
            .collect()
    };

    // side A: thin first, then annihilate
    let mut cfg_a = cfg.with_horizon(t);
    cfg_a.master_seed = rng::derive_seed(cfg.master_seed, 11);
    let seed_a = cfg_a.master_seed;
    let side_a = simulate_replicates(
        &cfg_a,
        |r, rng| {
            let dense = init(&ic, Model::Annihilating, rng)?;
            let mut thin_rng = rng::stream(seed_a, r, LANE_THINNING);
            thin(&dense, 0.5, &mut thin_rng)
        },
        |_, sys| Ok(count_vector(sys.positions())),
    )?;

    // side B: coalesce first, then thin the final state
    let mut cfg_b = cfg.with_horizon(t);
    cfg_b.master_seed = rng::derive_seed(cfg.master_seed, 12);
    let seed_b = cfg_b.master_seed;
    let side_b = simulate_replicates(
        &cfg_b,
        |_, rng| init(&ic, Model::Coalescing, rng),
        |r, sys| {
            let mut thin_rng = rng::stream(seed_b, r, LANE_THINNING);
            let thinned = thin(sys, 0.5, &mut thin_rng)?;
            Ok(count_vector(thinned.positions()))
        },
    )?;

    let mut table: BTreeMap<Vec<u8>, [u64; 2]> = BTreeMap::new();
    for v in side_a {
        table.entry(v).or_insert([0, 0])[0] += 1;
    }
    for v in side_b {
        table.entry(v).or_insert([0, 0])[1] += 1;
    }
    Ok(chi_square_two_sample(&table, 5.0))
}

/// Diffusive scaling check: the window count distribution at `(t, W)` must
/// match the one at `(T²t, T·W)` for entrance-law runs.
pub fn scaling_invariance_check(
    cfg: &RunConfig,
    t: f64,
    scale: f64,
    model: Model,
    intensity: f64,
) -> Result<ChiSquareTwoSample, SimulateError> {
    if !(scale > 0.0) {
        return Err(SimulateError::InvalidParameter(format!(
            "scale must be positive, got {scale}"
        )));
    }
    let count_in = |sys_positions: &[f64], lo: f64, hi: f64| -> u8 {
        sys_positions
            .iter()
            .filter(|&&x| lo < x && x < hi)
            .count()
            .min(255) as u8
    };

    let run_side = |tag: u64, horizon: f64, window: (f64, f64), buffer: f64, dt: f64| {
        let mut side_cfg = RunConfig {
            dt,
            t_end: horizon,
            observation_window: window,
            buffer,
            ..cfg.clone()
        };
        side_cfg.master_seed = rng::derive_seed(cfg.master_seed, tag);
        let init_window = (window.0 - buffer, window.1 + buffer);
        let ic = InitialCondition::Poisson {
            intensity,
            window: init_window,
        };
        simulate_replicates(
            &side_cfg,
            |_, rng| init(&ic, model, rng),
            |_, sys| Ok(count_in(sys.positions(), window.0, window.1)),
        )
    };

    let (wlo, whi) = cfg.observation_window;
    let side_a = run_side(21, t, (wlo, whi), cfg.buffer, cfg.dt)?;
    let side_b = run_side(
        22,
        scale * scale * t,
        (scale * wlo, scale * whi),
        scale * cfg.buffer,
        scale * scale * cfg.dt,
    )?;

    let mut table: BTreeMap<u8, [u64; 2]> = BTreeMap::new();
    for v in side_a {
        table.entry(v).or_insert([0, 0])[0] += 1;
    }
    for v in side_b {
        table.entry(v).or_insert([0, 0])[1] += 1;
    }
    Ok(chi_square_two_sample(&table, 5.0))
}
