//! Real Ginibre sampling and real-eigenvalue statistics.
//!
//! The annihilating-particle kernel at time t = 1/2 coincides with the
//! bulk real-real kernel of the real Ginibre ensemble, so the
//! real-eigenvalue point process of a large Gaussian matrix doubles as an
//! independent physical realization of the closed-form predictions: bulk
//! density `1/√(2π)` and the two-point function of `formulas::rho` with the
//! annihilating model.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use thiserror::Error;

use crate::formulas::{self, quad};
use crate::points::OrderedPoints;
use crate::rng::{self, LANE_GINIBRE};
use crate::simulate::{EstimatorResult, Welford};
use crate::Model;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GinibreError {
    #[error("eigensolver failed to converge for an {0}×{0} matrix")]
    EigensolverFailure(usize),
    #[error("matrix size must be at least 1")]
    EmptyMatrix,
    #[error("insufficient statistics: bin [{lo}, {hi}] holds {count} pairs (< {min})")]
    InsufficientStatistics {
        lo: f64,
        hi: f64,
        count: u64,
        min: u64,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Real eigenvalues extracted from one Ginibre draw.
#[derive(Debug, Clone, PartialEq)]
pub struct GinibreSample {
    pub n: usize,
    /// Sorted real eigenvalues; each retained eigenvalue had
    /// `|Im λ| ≤ tolerance_used · √n`.
    pub real_eigenvalues: Vec<f64>,
    pub tolerance_used: f64,
}

/// Default realness threshold, scaled by √n (the spectral radius scale).
pub const DEFAULT_REAL_TOL: f64 = 1e-8;

const SCHUR_MAX_ITER: usize = 10_000;

/// Eigenvalues of a real square matrix via its real Schur form; returns
/// `(re, im)` pairs read off the 1×1 and 2×2 diagonal blocks.
fn eigenvalues(matrix: DMatrix<f64>) -> Option<Vec<(f64, f64)>> {
    let n = matrix.nrows();
    let schur = nalgebra::linalg::Schur::try_new(matrix, f64::EPSILON, SCHUR_MAX_ITER)?;
    let (_, t) = schur.unpack();
    let mut eig = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        let sub = if i + 1 < n { t[(i + 1, i)] } else { 0.0 };
        if sub == 0.0 {
            eig.push((t[(i, i)], 0.0));
            i += 1;
        } else {
            // 2×2 block [[a, b], [c, d]] with a complex pair or two reals
            let (a, b) = (t[(i, i)], t[(i, i + 1)]);
            let (c, d) = (t[(i + 1, i)], t[(i + 1, i + 1)]);
            let mean = 0.5 * (a + d);
            let disc = 0.25 * (a - d) * (a - d) + b * c;
            if disc >= 0.0 {
                let root = disc.sqrt();
                eig.push((mean + root, 0.0));
                eig.push((mean - root, 0.0));
            } else {
                let imag = (-disc).sqrt();
                eig.push((mean, imag));
                eig.push((mean, -imag));
            }
            i += 2;
        }
    }
    Some(eig)
}

/// Draws one n×n matrix of independent standard Gaussians, computes its
/// full spectrum, and keeps the eigenvalues within the realness threshold.
pub fn sample_real_eigenvalues(
    n: usize,
    rng: &mut impl Rng,
    tol: f64,
) -> Result<GinibreSample, GinibreError> {
    if n == 0 {
        return Err(GinibreError::EmptyMatrix);
    }
    let m = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let trace: f64 = (0..n).map(|i| m[(i, i)]).sum();
    let eig = eigenvalues(m).ok_or(GinibreError::EigensolverFailure(n))?;
    // eigensolver sanity: the spectrum must sum to the trace
    let sum_re: f64 = eig.iter().map(|&(re, _)| re).sum();
    let scale = (n as f64).sqrt() * n as f64;
    debug_assert!(
        (sum_re - trace).abs() <= 1e-8 * scale.max(1.0),
        "eigenvalue sum {sum_re} vs trace {trace}"
    );
    let cutoff = tol * (n as f64).sqrt();
    let mut real: Vec<f64> = eig
        .iter()
        .filter(|&&(_, im)| im.abs() <= cutoff)
        .map(|&(re, _)| re)
        .collect();
    real.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(GinibreSample {
        n,
        real_eigenvalues: real,
        tolerance_used: tol,
    })
}

/// One histogram bin of the real-eigenvalue density.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramBin {
    pub left: f64,
    pub right: f64,
    pub count: u64,
    pub density: f64,
    /// Bulk prediction `1/√(2π)`, present only for bins inside the tested
    /// bulk window `|λ| ≤ √n/2`.
    pub predicted: Option<f64>,
}

/// Real-eigenvalue density report.
#[derive(Debug, Clone, PartialEq)]
pub struct RrDensityReport {
    pub bins: Vec<HistogramBin>,
    /// Bulk density estimate vs `1/√(2π)`.
    pub bulk_density: EstimatorResult,
    /// Mean number of real eigenvalues per sample (no closed prediction
    /// attached; the large-n value is `√(2n/π)` plus an O(1) correction).
    pub mean_count: EstimatorResult,
}

/// Samples `reps` matrices and histograms their real eigenvalues over
/// `[−1.25√n, 1.25√n]`; the bulk density is measured on `|λ| ≤ √n/2`.
pub fn rr_density(
    n: usize,
    reps: usize,
    n_bins: usize,
    master_seed: u64,
) -> Result<RrDensityReport, GinibreError> {
    if n == 0 {
        return Err(GinibreError::EmptyMatrix);
    }
    if reps == 0 || n_bins == 0 {
        return Err(GinibreError::InvalidParameter(
            "reps and bins must be positive".into(),
        ));
    }
    let sqrt_n = (n as f64).sqrt();
    let histo_edge = 1.25 * sqrt_n;
    let bulk_edge = 0.5 * sqrt_n;
    let bin_width = 2.0 * histo_edge / n_bins as f64;

    let samples = collect_samples(n, reps, master_seed)?;

    let mut counts = vec![0u64; n_bins];
    let mut bulk = Welford::new();
    let mut total = Welford::new();
    for sample in &samples {
        let mut in_bulk = 0u64;
        for &x in &sample.real_eigenvalues {
            if x.abs() <= bulk_edge {
                in_bulk += 1;
            }
            let b = ((x + histo_edge) / bin_width).floor();
            if b >= 0.0 && (b as usize) < n_bins {
                counts[b as usize] += 1;
            }
        }
        bulk.push(in_bulk as f64 / (2.0 * bulk_edge));
        total.push(sample.real_eigenvalues.len() as f64);
    }

    let bulk_prediction = (2.0 * std::f64::consts::PI).powf(-0.5);
    let bins = counts
        .iter()
        .enumerate()
        .map(|(b, &count)| {
            let left = -histo_edge + b as f64 * bin_width;
            let right = left + bin_width;
            let predicted = if left >= -bulk_edge && right <= bulk_edge {
                Some(bulk_prediction)
            } else {
                None
            };
            HistogramBin {
                left,
                right,
                count,
                density: count as f64 / (reps as f64 * bin_width),
                predicted,
            }
        })
        .collect();

    Ok(RrDensityReport {
        bins,
        bulk_density: EstimatorResult::from_welford(
            format!("ginibre-bulk-density/n{n}"),
            &bulk,
            Some(bulk_prediction),
        ),
        mean_count: EstimatorResult::from_welford(
            format!("ginibre-real-count/n{n}"),
            &total,
            None,
        ),
    })
}

/// One bin of the two-point correlation comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrespondenceBin {
    pub gap_left: f64,
    pub gap_right: f64,
    pub pair_count: u64,
    pub empirical: f64,
    pub predicted: f64,
    /// `empirical/predicted − 1`; `None` when the bin fails the pair-count
    /// threshold.
    pub rel_deviation: Option<f64>,
}

/// Compares the empirical two-point function of bulk real eigenvalues with
/// the annihilating kernel prediction at t = 1/2, where the kernel
/// correspondence has unit scale factor.
///
/// Bins with fewer than `min_pairs` pairs carry no deviation; the call
/// fails with `InsufficientStatistics` only when every bin is starved.
pub fn kernel_correspondence(
    n: usize,
    reps: usize,
    n_bins: usize,
    min_pairs: u64,
    master_seed: u64,
) -> Result<Vec<CorrespondenceBin>, GinibreError> {
    if n == 0 {
        return Err(GinibreError::EmptyMatrix);
    }
    if reps == 0 || n_bins == 0 {
        return Err(GinibreError::InvalidParameter(
            "reps and bins must be positive".into(),
        ));
    }
    let sqrt_n = (n as f64).sqrt();
    let bulk_edge = 0.5 * sqrt_n;
    let window_len = 2.0 * bulk_edge;
    // bins of a quarter of the unfolded mean spacing √(2π)
    let bin_width = (2.0 * std::f64::consts::PI).sqrt() / 4.0;
    let g_max = n_bins as f64 * bin_width;

    let samples = collect_samples(n, reps, master_seed)?;

    let mut counts = vec![0u64; n_bins];
    for sample in &samples {
        let xs = &sample.real_eigenvalues;
        for (i, &xi) in xs.iter().enumerate() {
            if xi.abs() > bulk_edge {
                continue;
            }
            for &xj in &xs[i + 1..] {
                let gap = xj - xi;
                if gap >= g_max {
                    break;
                }
                counts[(gap / bin_width) as usize] += 1;
            }
        }
    }

    let mut any_usable = false;
    let mut bins = Vec::with_capacity(n_bins);
    for (b, &count) in counts.iter().enumerate() {
        let gap_left = b as f64 * bin_width;
        let gap_right = gap_left + bin_width;
        let empirical = count as f64 / (reps as f64 * window_len * bin_width);
        let predicted = quad::integrate(
            &|g| {
                let pts = OrderedPoints::new(vec![0.0, g]).expect("ordered");
                formulas::rho(&pts, 0.5, Model::Annihilating).expect("valid rho")
            },
            gap_left.max(1e-12),
            gap_right,
            1e-10,
        )
        .map_err(|_| GinibreError::InvalidParameter("prediction quadrature".into()))?
            / bin_width;
        let rel_deviation = if count >= min_pairs {
            any_usable = true;
            Some(empirical / predicted - 1.0)
        } else {
            None
        };
        bins.push(CorrespondenceBin {
            gap_left,
            gap_right,
            pair_count: count,
            empirical,
            predicted,
            rel_deviation,
        });
    }
    if !any_usable {
        let starved = &bins[0];
        return Err(GinibreError::InsufficientStatistics {
            lo: starved.gap_left,
            hi: starved.gap_right,
            count: starved.pair_count,
            min: min_pairs,
        });
    }
    Ok(bins)
}

/// Samples a matrix-valued Brownian motion `M_{t+dt} = M_t + √dt·G` from
/// `M_0 = 0` and returns the real-eigenvalue configuration at each
/// requested time. Exploratory: the increments are exact in law, so the
/// requested times are sampled without discretization error.
pub fn matrix_bm_trajectory(
    n: usize,
    times: &[f64],
    rng: &mut ChaCha8Rng,
    tol: f64,
) -> Result<Vec<GinibreSample>, GinibreError> {
    if n == 0 {
        return Err(GinibreError::EmptyMatrix);
    }
    if times.is_empty() || times[0] <= 0.0 || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(GinibreError::InvalidParameter(
            "times must be increasing and start above zero".into(),
        ));
    }
    let mut m = DMatrix::zeros(n, n);
    let mut prev = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let sd = (t - prev).sqrt();
        for i in 0..n {
            for j in 0..n {
                let g: f64 = rng.sample(StandardNormal);
                m[(i, j)] += sd * g;
            }
        }
        prev = t;
        let eig = eigenvalues(m.clone()).ok_or(GinibreError::EigensolverFailure(n))?;
        let cutoff = tol * (n as f64).sqrt() * t.sqrt();
        let mut real: Vec<f64> = eig
            .iter()
            .filter(|&&(_, im)| im.abs() <= cutoff)
            .map(|&(re, _)| re)
            .collect();
        real.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out.push(GinibreSample {
            n,
            real_eigenvalues: real,
            tolerance_used: tol,
        });
    }
    Ok(out)
}

fn collect_samples(
    n: usize,
    reps: usize,
    master_seed: u64,
) -> Result<Vec<GinibreSample>, GinibreError> {
    (0..reps as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng::stream(master_seed, r, LANE_GINIBRE);
            sample_real_eigenvalues(n, &mut rng, DEFAULT_REAL_TOL)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn one_by_one_is_the_entry() {
        let mut rng = stream(3, 0, LANE_GINIBRE);
        let s = sample_real_eigenvalues(1, &mut rng, DEFAULT_REAL_TOL).unwrap();
        assert_eq!(s.real_eigenvalues.len(), 1);
        assert!(s.real_eigenvalues[0].is_finite());
    }

    #[test]
    fn parity_matches_matrix_size() {
        for r in 0..200u64 {
            let mut rng = stream(17, r, LANE_GINIBRE);
            let n = 3 + (r % 5) as usize;
            let s = sample_real_eigenvalues(n, &mut rng, DEFAULT_REAL_TOL).unwrap();
            assert_eq!(
                s.real_eigenvalues.len() % 2,
                n % 2,
                "n={n}, got {} real eigenvalues",
                s.real_eigenvalues.len()
            );
        }
    }

    #[test]
    fn two_by_two_real_count() {
        // E[#real] = √2, checked against the discriminant rule brute force
        let reps = 20_000u64;
        let mut mc = Welford::new();
        let mut brute = Welford::new();
        for r in 0..reps {
            let mut rng = stream(23, r, LANE_GINIBRE);
            let s = sample_real_eigenvalues(2, &mut rng, DEFAULT_REAL_TOL).unwrap();
            mc.push(s.real_eigenvalues.len() as f64);

            // independent draw, spectrum is real iff (a−d)² + 4bc ≥ 0
            let mut rng2 = stream(24, r, LANE_GINIBRE);
            let (a, b, c, d): (f64, f64, f64, f64) = (
                rng2.sample(StandardNormal),
                rng2.sample(StandardNormal),
                rng2.sample(StandardNormal),
                rng2.sample(StandardNormal),
            );
            let real = (a - d) * (a - d) + 4.0 * b * c >= 0.0;
            brute.push(if real { 2.0 } else { 0.0 });
        }
        let want = std::f64::consts::SQRT_2;
        assert!(
            (mc.mean() - want).abs() < 3.0 * mc.stderr(),
            "solver route: {} ± {}",
            mc.mean(),
            mc.stderr()
        );
        assert!(
            (brute.mean() - want).abs() < 3.0 * brute.stderr(),
            "discriminant route: {} ± {}",
            brute.mean(),
            brute.stderr()
        );
    }

    #[test]
    fn spectrum_sums_to_trace() {
        for r in 0..20u64 {
            let mut rng = stream(31, r, LANE_GINIBRE);
            let n = 30;
            let m = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
            let trace: f64 = (0..n).map(|i| m[(i, i)]).sum();
            let norm = m.norm();
            let eig = eigenvalues(m).unwrap();
            let sum_re: f64 = eig.iter().map(|&(re, _)| re).sum();
            let sum_im: f64 = eig.iter().map(|&(_, im)| im).sum();
            assert!((sum_re - trace).abs() <= 1e-8 * norm, "{sum_re} vs {trace}");
            assert!(sum_im.abs() <= 1e-8 * norm);
        }
    }

    #[test]
    fn tolerance_halving_is_stable() {
        // halving the realness tolerance changes the count in <0.1% of draws
        let reps = 2_000u64;
        let mut changed = 0u64;
        for r in 0..reps {
            let mut rng_a = stream(41, r, LANE_GINIBRE);
            let a = sample_real_eigenvalues(40, &mut rng_a, DEFAULT_REAL_TOL).unwrap();
            let mut rng_b = stream(41, r, LANE_GINIBRE);
            let b = sample_real_eigenvalues(40, &mut rng_b, DEFAULT_REAL_TOL / 2.0).unwrap();
            if a.real_eigenvalues.len() != b.real_eigenvalues.len() {
                changed += 1;
            }
        }
        assert!(changed <= 2, "{changed} of {reps} samples changed");
    }

    #[test]
    fn trajectory_single_time_is_scaled_ginibre() {
        // at a single time t the law is √t × static Ginibre
        let mut rng = stream(5, 0, LANE_GINIBRE);
        let t = 4.0;
        let traj = matrix_bm_trajectory(12, &[t], &mut rng, DEFAULT_REAL_TOL).unwrap();
        assert_eq!(traj.len(), 1);
        assert_eq!(traj[0].real_eigenvalues.len() % 2, 0);
        // same stream reproduces the static draw scaled by √t
        let mut rng2 = stream(5, 0, LANE_GINIBRE);
        let static_sample = sample_real_eigenvalues(12, &mut rng2, DEFAULT_REAL_TOL).unwrap();
        for (a, b) in traj[0]
            .real_eigenvalues
            .iter()
            .zip(static_sample.real_eigenvalues.iter())
        {
            assert!((a - b * t.sqrt()).abs() < 1e-9, "{a} vs {}", b * t.sqrt());
        }
    }

    #[test]
    fn trajectory_parity_along_path() {
        let mut rng = stream(6, 0, LANE_GINIBRE);
        let traj =
            matrix_bm_trajectory(9, &[0.5, 1.0, 2.0], &mut rng, DEFAULT_REAL_TOL).unwrap();
        for s in &traj {
            assert_eq!(s.real_eigenvalues.len() % 2, 9 % 2);
        }
    }

    #[test]
    fn input_validation() {
        let mut rng = stream(1, 0, LANE_GINIBRE);
        assert!(matches!(
            sample_real_eigenvalues(0, &mut rng, 1e-8),
            Err(GinibreError::EmptyMatrix)
        ));
        assert!(matrix_bm_trajectory(3, &[], &mut rng, 1e-8).is_err());
        assert!(matrix_bm_trajectory(3, &[0.0, 1.0], &mut rng, 1e-8).is_err());
        assert!(matrix_bm_trajectory(3, &[1.0, 1.0], &mut rng, 1e-8).is_err());
    }
}
