use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::rng::{self, LANE_DYNAMICS, LANE_INIT};
use crate::Model;

use super::system::{init, InitialCondition, ParticleSystem};
use super::SimulateError;

/// Replicated-run parameters. Replicate seeds derive deterministically from
/// `master_seed`, so results are independent of thread count and execution
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dt: f64,
    pub t_end: f64,
    pub replicates: usize,
    pub master_seed: u64,
    /// Window on which observables are evaluated.
    pub observation_window: (f64, f64),
    /// Extra initialization margin on each side of the observation window.
    pub buffer: f64,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), SimulateError> {
        if !(self.dt > 0.0) {
            return Err(SimulateError::NonpositiveStep(self.dt));
        }
        if !(self.t_end > 0.0) || self.dt > self.t_end {
            return Err(SimulateError::InvalidParameter(format!(
                "horizon {} must be positive and at least dt {}",
                self.t_end, self.dt
            )));
        }
        if !(self.buffer >= 0.0) {
            return Err(SimulateError::InvalidParameter(format!(
                "buffer must be nonnegative, got {}",
                self.buffer
            )));
        }
        let (lo, hi) = self.observation_window;
        if !(hi > lo) {
            return Err(SimulateError::EmptyWindow { lo, hi });
        }
        Ok(())
    }

    /// Same configuration with a different horizon.
    pub fn with_horizon(&self, t_end: f64) -> RunConfig {
        RunConfig { t_end, ..self.clone() }
    }
}

/// One Euler–Maruyama step of size `dt` with bridge-corrected collision
/// resolution.
///
/// Every particle receives an independent N(0, dt) increment. An adjacent
/// pair reacts when its proposed endpoints cross, or otherwise with the
/// Brownian-bridge hitting probability `exp(−a·b/dt)` where `a` and `b` are
/// the pair gaps before and after the step (the gap process has variance
/// rate 2, so the bridge exponent `2ab/(2dt)` reduces to `ab/dt`).
/// Reactions sweep left to right and cascade until no adjacent pair reacts;
/// coalescing pairs merge at the midpoint of their proposed endpoints,
/// annihilating pairs vanish.
pub fn step(
    sys: &mut ParticleSystem,
    dt: f64,
    rng: &mut impl Rng,
) -> Result<(), SimulateError> {
    if !(dt > 0.0) {
        return Err(SimulateError::NonpositiveStep(dt));
    }
    let new_time = sys.time() + dt;
    if sys.count() == 0 {
        sys.advance(Vec::new(), new_time);
        return Ok(());
    }
    let sd = dt.sqrt();
    // (pre-step position, proposed position) per particle
    let mut parts: Vec<(f64, f64)> = sys
        .positions()
        .iter()
        .map(|&x| {
            let z: f64 = rng.sample(StandardNormal);
            (x, x + sd * z)
        })
        .collect();

    let model = sys.model();
    let mut i = 0usize;
    while parts.len() >= 2 && i + 1 < parts.len() {
        let (old_l, new_l) = parts[i];
        let (old_r, new_r) = parts[i + 1];
        let gap_before = old_r - old_l;
        let gap_after = new_r - new_l;
        let reacts = if gap_after <= 0.0 {
            true
        } else {
            let p_hit = (-gap_before * gap_after / dt).exp();
            rng.gen::<f64>() < p_hit
        };
        if reacts {
            match model {
                Model::Coalescing => {
                    parts[i] = (0.5 * (old_l + old_r), 0.5 * (new_l + new_r));
                    parts.remove(i + 1);
                }
                Model::Annihilating => {
                    parts.drain(i..i + 2);
                }
            }
            // a reaction creates a new adjacency on the left; re-examine it
            i = i.saturating_sub(1);
        } else {
            i += 1;
        }
    }

    let positions: Vec<f64> = parts.into_iter().map(|(_, new)| new).collect();
    sys.advance(positions, new_time);
    Ok(())
}

/// Runs each replicate from its own initial draw to `cfg.t_end` and maps the
/// final state through `observe`.
///
/// `make_initial` and `observe` receive the replicate index so they can
/// derive per-replicate substreams; initialization randomness comes from its
/// own lane, dynamics from another. Failures in any replicate abort the run.
pub fn simulate_replicates<R, FInit, FObs>(
    cfg: &RunConfig,
    make_initial: FInit,
    observe: FObs,
) -> Result<Vec<R>, SimulateError>
where
    R: Send,
    FInit: Fn(u64, &mut ChaCha8Rng) -> Result<ParticleSystem, SimulateError> + Sync,
    FObs: Fn(u64, &ParticleSystem) -> Result<R, SimulateError> + Sync,
{
    cfg.validate()?;
    if cfg.replicates == 0 {
        return Err(SimulateError::NoReplicates);
    }
    let n_full = ((cfg.t_end / cfg.dt) + 1e-9).floor() as u64;
    let remainder = (cfg.t_end - n_full as f64 * cfg.dt).max(0.0);
    let take_remainder = remainder > 1e-9 * cfg.dt;

    (0..cfg.replicates as u64)
        .into_par_iter()
        .map(|r| {
            let mut init_rng = rng::stream(cfg.master_seed, r, LANE_INIT);
            let mut sys = make_initial(r, &mut init_rng)?;
            let mut dyn_rng = rng::stream(cfg.master_seed, r, LANE_DYNAMICS);
            for _ in 0..n_full {
                step(&mut sys, cfg.dt, &mut dyn_rng)?;
            }
            if take_remainder {
                step(&mut sys, remainder, &mut dyn_rng)?;
            }
            observe(r, &sys)
        })
        .collect()
}

/// Convenience wrapper around [`simulate_replicates`] for a fixed initial
/// condition and an infallible observable.
pub fn run_map<R, FObs>(
    ic: &InitialCondition,
    model: Model,
    cfg: &RunConfig,
    observe: FObs,
) -> Result<Vec<R>, SimulateError>
where
    R: Send,
    FObs: Fn(&ParticleSystem) -> R + Sync,
{
    simulate_replicates(cfg, |_, rng| init(ic, model, rng), |_, sys| Ok(observe(sys)))
}

/// Runs all replicates and returns their final states in replicate order.
pub fn run(
    ic: &InitialCondition,
    model: Model,
    cfg: &RunConfig,
) -> Result<Vec<ParticleSystem>, SimulateError> {
    run_map(ic, model, cfg, |sys| sys.clone())
}
