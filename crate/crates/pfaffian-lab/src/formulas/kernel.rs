//! The 2×2 matrix kernel of the fixed-time Pfaffian point process and the
//! n-point densities assembled from it.

use crate::pfaffian::{pf, SkewMatrix};
use crate::points::OrderedPoints;
use crate::Model;

use super::erf_family;
use super::FormulaError;

/// One 2×2 block `K(x, y)` of the process kernel.
///
/// Block antisymmetry holds in the kernel sense: `K_ab(x, y) = −K_ba(y, x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelBlock {
    pub k11: f64,
    pub k12: f64,
    pub k21: f64,
    pub k22: f64,
}

/// Kernel block at time `t`: `t^{−1/2} K(x t^{−1/2}, y t^{−1/2})` with
///
/// ```text
/// K(x, y) = [ −F″(y−x)   −F′(y−x)          ]
///           [  F′(y−x)    sgn(y−x) F(|y−x|) ]
/// ```
///
/// multiplied by 1/2 for the annihilating model, whose particle positions
/// form the per-point half-thinning of the coalescing process.
pub fn kernel_k(x: f64, y: f64, t: f64, model: Model) -> Result<KernelBlock, FormulaError> {
    if !(t > 0.0) {
        return Err(FormulaError::NonpositiveTime(t));
    }
    let s = t.powf(-0.5);
    let d = (y - x) * s;
    let thin = match model {
        Model::Coalescing => 1.0,
        Model::Annihilating => 0.5,
    };
    let c = thin * s;
    Ok(KernelBlock {
        k11: -erf_family::f_second(d) * c,
        k12: -erf_family::f_prime(d) * c,
        k21: erf_family::f_prime(d) * c,
        k22: sgn(d) * erf_family::f(d.abs()) * c,
    })
}

fn sgn(z: f64) -> f64 {
    if z > 0.0 {
        1.0
    } else if z < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// n-point density `ρ^{(n)}(x_1, …, x_n)` at time `t`: the Pfaffian of the
/// 2n×2n antisymmetric matrix tiled from kernel blocks `K(x_i, x_j)`.
pub fn rho(points: &OrderedPoints, t: f64, model: Model) -> Result<f64, FormulaError> {
    if !(t > 0.0) {
        return Err(FormulaError::NonpositiveTime(t));
    }
    let xs = points.coords();
    let n = xs.len();
    // Blocks for i ≤ j; entries below the block diagonal follow by
    // antisymmetry inside from_upper.
    let mut blocks = vec![KernelBlock { k11: 0.0, k12: 0.0, k21: 0.0, k22: 0.0 }; n * n];
    for i in 0..n {
        for j in i..n {
            blocks[i * n + j] = kernel_k(xs[i], xs[j], t, model)?;
        }
    }
    let m = SkewMatrix::from_upper(2 * n, |p, q| {
        let (a, r) = (p / 2, p % 2);
        let (b, s) = (q / 2, q % 2);
        let blk = &blocks[a * n + b];
        match (r, s) {
            (0, 0) => blk.k11,
            (0, 1) => blk.k12,
            (1, 0) => blk.k21,
            _ => blk.k22,
        }
    });
    Ok(pf(&m)?)
}
