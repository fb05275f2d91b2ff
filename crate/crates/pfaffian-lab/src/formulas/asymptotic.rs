//! Large-time asymptotics of the 2n-point densities and the
//! small-separation limit behind them.

use std::f64::consts::PI;

use crate::pfaffian::{pf, SkewMatrix};
use crate::points::OrderedPoints;
use crate::Model;

use super::erf_family::phi;
use super::jmatrix::j_matrix;
use super::FormulaError;

/// Largest point count for the small-separation check.
const MAX_SEPARATION_POINTS: usize = 12;

/// `Π_{i<j} (x_j − x_i)`.
pub fn vandermonde(coords: &[f64]) -> f64 {
    let mut prod = 1.0;
    for i in 0..coords.len() {
        for j in (i + 1)..coords.len() {
            prod *= coords[j] - coords[i];
        }
    }
    prod
}

/// Result of one small-separation evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationCheck {
    /// `Pf(φ(y_j − y_i)) / Π(y_j − y_i)` at `y = eps·x`.
    pub ratio: f64,
    /// The exact limit `Pf(J^{(2n)})`.
    pub limit: f64,
    /// `|ratio − limit|`; shrinks at least linearly in `eps`.
    pub gap: f64,
}

/// Compares the scaled Pfaffian ratio at separation scale `eps` against its
/// exact limit.
pub fn small_separation_check(
    points: &OrderedPoints,
    eps: f64,
) -> Result<SeparationCheck, FormulaError> {
    let count = points.len();
    if count % 2 != 0 {
        return Err(FormulaError::OddPointCount(count));
    }
    if count > MAX_SEPARATION_POINTS {
        return Err(FormulaError::DimensionTooLarge {
            dim: count,
            max: MAX_SEPARATION_POINTS,
        });
    }
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(FormulaError::DegeneratePoints);
    }
    let ys: Vec<f64> = points.coords().iter().map(|x| eps * x).collect();
    // scaling can underflow distinct coordinates together
    for i in 0..count {
        for j in (i + 1)..count {
            if ys[j] - ys[i] == 0.0 {
                return Err(FormulaError::DegeneratePoints);
            }
        }
    }
    let m = SkewMatrix::from_upper(count, |i, j| phi(ys[j] - ys[i]));
    let ratio = pf(&m)? / vandermonde(&ys);
    let limit = j_matrix(count / 2)?.pfaffian_f64();
    Ok(SeparationCheck {
        ratio,
        limit,
        gap: (ratio - limit).abs(),
    })
}

/// The modified 2n-point density
/// `ρ̃_t(x) = (4πt²)^{−n/2} Pf(φ((x_j − x_i)/√t))`
/// (the density constrained to alternate empty intervals).
pub fn rho_tilde(points: &OrderedPoints, t: f64) -> Result<f64, FormulaError> {
    if !(t > 0.0) {
        return Err(FormulaError::NonpositiveTime(t));
    }
    let count = points.len();
    if count % 2 != 0 {
        return Err(FormulaError::OddPointCount(count));
    }
    let n = count / 2;
    let s = t.powf(-0.5);
    let xs = points.coords();
    let m = SkewMatrix::from_upper(count, |i, j| phi((xs[j] - xs[i]) * s));
    let norm = (4.0 * PI * t * t).powf(-(n as f64) / 2.0);
    Ok(norm * pf(&m)?)
}

/// The model-dependent limit constant `c^{−n/2} Pf(J^{(2n)})` with
/// `c = 4π` (coalescing) or `64π` (annihilating).
pub fn asymptotic_constant(n_pairs: usize, model: Model) -> Result<f64, FormulaError> {
    let c = match model {
        Model::Coalescing => 4.0 * PI,
        Model::Annihilating => 64.0 * PI,
    };
    Ok(c.powf(-(n_pairs as f64) / 2.0) * j_matrix(n_pairs)?.pfaffian_f64())
}

/// Leading large-time term of the 2n-point density:
/// `t^{−n−n(2n−1)/2} · Π|x_i−x_j| · c^{−n/2} Pf(J^{(2n)})`.
pub fn asymptotic_density(
    points: &OrderedPoints,
    t: f64,
    model: Model,
) -> Result<f64, FormulaError> {
    if !(t > 0.0) {
        return Err(FormulaError::NonpositiveTime(t));
    }
    let count = points.len();
    if count % 2 != 0 {
        return Err(FormulaError::OddPointCount(count));
    }
    let n = count / 2;
    let exponent = -(n as f64) - (n * (2 * n - 1)) as f64 / 2.0;
    Ok(t.powf(exponent)
        * vandermonde(points.coords()).abs()
        * asymptotic_constant(n, model)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::kernel::rho;

    #[test]
    fn two_point_ratio_directly() {
        let pts = OrderedPoints::new(vec![0.0, 1.0]).unwrap();
        let c = small_separation_check(&pts, 0.01).unwrap();
        assert!((c.ratio - 0.9999750003124974).abs() < 1e-14);
        assert_eq!(c.limit, 1.0);
        assert!((c.gap - 2.4999687502580414e-5).abs() < 1e-12);
    }

    #[test]
    fn four_point_gaps_shrink_at_least_linearly() {
        let pts = OrderedPoints::new(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let gaps: Vec<f64> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&e| small_separation_check(&pts, e).unwrap().gap)
            .collect();
        // frozen values from an independent evaluation
        assert!((gaps[0] - 2.0649577842e-3).abs() < 1e-10);
        assert!((gaps[1] - 5.1967951804e-4).abs() < 1e-10);
        assert!((gaps[2] - 1.3013621765e-4).abs() < 1e-10);
        assert!(gaps[1] < gaps[0] && gaps[2] < gaps[1]);
        // empirical order ≥ 1: halving eps at most ~halves the gap
        assert!(gaps[1] <= 0.55 * gaps[0]);
        assert!(gaps[2] <= 0.55 * gaps[1]);
    }

    #[test]
    fn ratio_is_shift_invariant() {
        let a = OrderedPoints::new(vec![0.0, 0.7, 1.9, 3.1]).unwrap();
        let b = a.affine(1.0, 42.0).unwrap();
        let ca = small_separation_check(&a, 0.05).unwrap();
        let cb = small_separation_check(&b, 0.05).unwrap();
        assert!((ca.ratio - cb.ratio).abs() < 1e-9);
    }

    #[test]
    fn degenerate_scale_rejected() {
        let pts = OrderedPoints::new(vec![0.0, 1.0]).unwrap();
        assert!(matches!(
            small_separation_check(&pts, 0.0),
            Err(FormulaError::DegeneratePoints)
        ));
        // distinct points whose scaled difference underflows to zero
        let close = OrderedPoints::new(vec![0.0, 1e-300]).unwrap();
        assert!(matches!(
            small_separation_check(&close, 1e-100),
            Err(FormulaError::DegeneratePoints)
        ));
    }

    #[test]
    fn rho_tilde_two_points() {
        let pts = OrderedPoints::new(vec![0.0, 0.1]).unwrap();
        let v = rho_tilde(&pts, 1.0).unwrap();
        assert!((v - 0.02813904356065048).abs() < 1e-15, "{v}");
    }

    #[test]
    fn rho_tilde_scaling_exponent() {
        // t ↦ T²t, x ↦ Tx leaves t^{n² + n/2} ρ̃ / Π(x_j−x_i) unchanged
        let pts = OrderedPoints::new(vec![0.0, 0.4, 1.1, 2.0]).unwrap();
        let n = 2.0;
        let expo = n * n + n / 2.0;
        let base = 1.0f64.powf(expo) * rho_tilde(&pts, 1.0).unwrap()
            / vandermonde(pts.coords());
        for tt in [2.0f64, 5.0] {
            let scaled_pts = pts.affine(tt, 0.0).unwrap();
            let t = tt * tt;
            let v = t.powf(expo) * rho_tilde(&scaled_pts, t).unwrap()
                / vandermonde(scaled_pts.coords());
            assert!((v - base).abs() < 1e-12 * base.abs(), "T={tt}: {v} vs {base}");
        }
    }

    #[test]
    fn asymptotic_constants() {
        let c1 = asymptotic_constant(1, Model::Coalescing).unwrap();
        assert!((c1 - (4.0 * PI).powf(-0.5)).abs() < 1e-15);
        let c2 = asymptotic_constant(2, Model::Coalescing).unwrap();
        assert!((c2 - 1.0 / (32.0 * PI)).abs() < 1e-15);
        // annihilating/coalescing ratio is 4^{−n}
        for n in 1..=4usize {
            let r = asymptotic_constant(n, Model::Annihilating).unwrap()
                / asymptotic_constant(n, Model::Coalescing).unwrap();
            assert!((r - 0.25f64.powi(n as i32)).abs() < 1e-12);
        }
    }

    #[test]
    fn asymptotic_density_unit_cases() {
        let p2 = OrderedPoints::new(vec![0.0, 1.0]).unwrap();
        let v = asymptotic_density(&p2, 1.0, Model::Coalescing).unwrap();
        assert!((v - 0.28209479177387814).abs() < 1e-14);
        let p4 = OrderedPoints::new(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let v4 = asymptotic_density(&p4, 1.0, Model::Coalescing).unwrap();
        // Vandermonde of (0,1,2,3) is 12
        assert!((v4 - 12.0 / (32.0 * PI)).abs() < 1e-14);
    }

    #[test]
    fn kernel_density_converges_to_asymptotic_constant() {
        // t^{n + n(2n−1)/2} ρ(x, t) / Π|x_i−x_j| → c^{−n/2} Pf(J)
        for (pts, n) in [
            (OrderedPoints::new(vec![0.0, 1.0]).unwrap(), 1usize),
            (OrderedPoints::new(vec![0.0, 1.0, 2.0, 3.0]).unwrap(), 2),
        ] {
            let limit = asymptotic_constant(n, Model::Coalescing).unwrap();
            let expo = n as f64 + (n * (2 * n - 1)) as f64 / 2.0;
            let vand = vandermonde(pts.coords()).abs();
            let mut prev_gap = f64::INFINITY;
            for t in [1e2f64, 1e3, 1e4] {
                let ratio = t.powf(expo) * rho(&pts, t, Model::Coalescing).unwrap() / vand;
                let gap = (ratio - limit).abs() / limit;
                assert!(gap < prev_gap, "gap not decreasing at t={t}");
                prev_gap = gap;
            }
            assert!(prev_gap < 0.01, "final relative gap {prev_gap}");
        }
    }
}
