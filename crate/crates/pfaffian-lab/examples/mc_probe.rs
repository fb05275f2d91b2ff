use pfaffian_lab::simulate::*;
use pfaffian_lab::Model;
use std::time::Instant;

fn main() {
    // decompose entrance-density bias: vary reps/dt/intensity
    for (reps, dt, lam, seed) in [
        (20_000usize, 1e-3f64, 10.0f64, 7u64),
        (20_000, 5e-4, 10.0, 8),
        (10_000, 1e-3, 20.0, 9),
    ] {
        let t0 = Instant::now();
        let ecfg = RunConfig {
            dt, t_end: 1.0, replicates: reps, master_seed: seed,
            observation_window: (-20.0, 20.0), buffer: 6.0,
        };
        let rep = entrance_density_experiment(&ecfg, 1.0, Model::Coalescing, lam, None).unwrap();
        println!("reps={reps} dt={dt} lam={lam}: density={:.5} stderr={:.5} z={:+.2} [{:.1?}]",
            rep.density.estimate, rep.density.stderr, rep.density.z_score.unwrap(), t0.elapsed());
    }
}
