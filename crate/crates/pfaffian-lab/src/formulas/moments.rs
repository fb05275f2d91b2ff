//! Product moments of annihilating systems: `m^{(n)}_t(x) = E[Π g(X^i_t)]`
//! for particles started at `x_1 < … < x_n`, with the empty product equal
//! to 1.
//!
//! The two-particle moment is evaluated directly: the extinction mass plus
//! the two-particle survival integral, whose kernel is the 2×2 reflection
//! determinant of heat kernels (the non-colliding transition density).
//! Higher moments are Pfaffians of the pair moments; odd orders use the
//! augmented matrix whose extra row holds the one-particle moments.

use crate::pfaffian::{pf, SkewMatrix};
use crate::points::OrderedPoints;

use super::erf_family;
use super::quad;
use super::FormulaError;

/// Largest point count accepted by [`product_moment`].
const MAX_POINTS: usize = 12;
/// Half-plane truncation radius in standard deviations of the heat kernel.
const TRUNC_SDS: f64 = 8.0;
/// Absolute tolerance for the survival integral.
const PAIR_TOL: f64 = 1e-9;

/// Builtin bounded test functions for the product-moment machinery.
#[derive(Debug, Clone, PartialEq)]
pub enum TestFunction {
    /// `g ≡ 0`: the moment degenerates to the extinction probability.
    Zero,
    /// `g ≡ 1`: the moment is identically 1.
    One,
    /// `g(x) = e^{−x²}`.
    GaussianBump,
    /// `g(x) = χ(lo < x < hi)`.
    Indicator { lo: f64, hi: f64 },
    /// `g(x) = (−1)^{#{i : x ≤ a_i}}`, the duality weight for the given
    /// interval endpoints.
    IntervalParity { endpoints: Vec<f64> },
}

impl TestFunction {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            TestFunction::Zero => 0.0,
            TestFunction::One => 1.0,
            TestFunction::GaussianBump => (-x * x).exp(),
            TestFunction::Indicator { lo, hi } => {
                if x > *lo && x < *hi {
                    1.0
                } else {
                    0.0
                }
            }
            TestFunction::IntervalParity { endpoints } => {
                let crossings = endpoints.iter().filter(|&&a| x <= a).count();
                if crossings % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }
}

/// Gaussian heat kernel of variance `t`.
fn heat_kernel(t: f64, x: f64, y: f64) -> f64 {
    let d = y - x;
    (-d * d / (2.0 * t)).exp() / (2.0 * std::f64::consts::PI * t).sqrt()
}

/// One-particle moment: the heat semigroup applied to `g`.
pub fn first_moment(
    x: f64,
    t: f64,
    g: &(dyn Fn(f64) -> f64 + Sync),
) -> Result<f64, FormulaError> {
    if !(t > 0.0) {
        return Err(FormulaError::NonpositiveTime(t));
    }
    let sd = t.sqrt();
    let lo = x - TRUNC_SDS * sd;
    let hi = x + TRUNC_SDS * sd;
    quad::integrate(&|y| heat_kernel(t, x, y) * g(y), lo, hi, PAIR_TOL)
        .map_err(|_| FormulaError::QuadratureNonConvergence)
}

/// Two-particle moment
/// `m^{(2)}_t(x1,x2) = F((x2−x1)/√t) + ∬_{y1<y2} det[p_t(x_i,y_j)] g(y1)g(y2)`.
///
/// The half-plane `y1 < y2` is rotated to `u = (y2−y1)/√2 > 0`,
/// `v = (y1+y2)/√2`, truncated at 8 standard deviations, and integrated
/// adaptively; Gaussian decay keeps the truncation error far below the
/// 1e−8 target.
pub fn pair_moment(
    x1: f64,
    x2: f64,
    t: f64,
    g: &(dyn Fn(f64) -> f64 + Sync),
) -> Result<f64, FormulaError> {
    if !(t > 0.0) {
        return Err(FormulaError::NonpositiveTime(t));
    }
    if !(x1 < x2) {
        return Err(FormulaError::UnorderedArguments(x1, x2));
    }
    let sqrt2 = std::f64::consts::SQRT_2;
    let sd = t.sqrt();
    let a = (x2 - x1) / sqrt2;
    let b = (x1 + x2) / sqrt2;
    let norm = 1.0 / (2.0 * std::f64::consts::PI * t);
    let integrand = |u: f64, v: f64| -> f64 {
        let gap = (v - b) * (v - b);
        let direct = (-((u - a) * (u - a) + gap) / (2.0 * t)).exp();
        let swapped = (-((u + a) * (u + a) + gap) / (2.0 * t)).exp();
        let y1 = (v - u) / sqrt2;
        let y2 = (v + u) / sqrt2;
        norm * (direct - swapped) * g(y1) * g(y2)
    };
    let u_range = (0.0, a + TRUNC_SDS * sd);
    let v_range = (b - TRUNC_SDS * sd, b + TRUNC_SDS * sd);
    let survival = quad::integrate2d(&integrand, u_range, v_range, PAIR_TOL)
        .map_err(|_| FormulaError::QuadratureNonConvergence)?;
    Ok(erf_family::f((x2 - x1) / sd) + survival)
}

/// Product moment for any number of particles up to 12.
///
/// Even counts are the Pfaffian of the pair moments; odd counts prepend a
/// phantom index whose pairings contribute the one-particle moments.
pub fn product_moment(
    points: &OrderedPoints,
    t: f64,
    g: &(dyn Fn(f64) -> f64 + Sync),
) -> Result<f64, FormulaError> {
    let xs = points.coords();
    let n = xs.len();
    if n > MAX_POINTS {
        return Err(FormulaError::DimensionTooLarge {
            dim: n,
            max: MAX_POINTS,
        });
    }
    if n == 1 {
        return first_moment(xs[0], t, g);
    }
    if n % 2 == 0 {
        let mut pairs = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                pairs[i * n + j] = pair_moment(xs[i], xs[j], t, g)?;
            }
        }
        let m = SkewMatrix::from_upper(n, |i, j| pairs[i * n + j]);
        Ok(pf(&m)?)
    } else {
        // augmented (n+1)×(n+1) matrix: row 0 holds the single-particle
        // moments, the rest the pair moments shifted by one index
        let dim = n + 1;
        let mut firsts = vec![0.0; n];
        for (k, &x) in xs.iter().enumerate() {
            firsts[k] = first_moment(x, t, g)?;
        }
        let mut pairs = vec![0.0; dim * dim];
        for i in 0..n {
            for j in (i + 1)..n {
                pairs[(i + 1) * dim + (j + 1)] = pair_moment(xs[i], xs[j], t, g)?;
            }
        }
        let m = SkewMatrix::from_upper(dim, |i, j| {
            if i == 0 {
                firsts[j - 1]
            } else {
                pairs[i * dim + j]
            }
        });
        Ok(pf(&m)?)
    }
}
