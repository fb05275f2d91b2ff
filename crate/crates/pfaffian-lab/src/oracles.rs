//! Independent reference routes used by the verification battery and tests.
//!
//! Nothing here shares an algorithm with the implementation it checks:
//! determinants come from Gaussian elimination (exact or pivoted LU), and
//! the special-function oracle integrates the defining integral directly.

use num::BigRational;
use num_traits::{One, Zero};

use crate::formulas::quad;

/// Exact determinant of a rational matrix by fraction-free-ordered Gaussian
/// elimination over the field.
pub fn det_rational(rows: &[Vec<BigRational>]) -> BigRational {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let mut det = BigRational::one();
    for k in 0..n {
        let pivot_row = match (k..n).find(|&i| !m[i][k].is_zero()) {
            Some(i) => i,
            None => return BigRational::zero(),
        };
        if pivot_row != k {
            m.swap(pivot_row, k);
            det = -det;
        }
        let pivot = m[k][k].clone();
        det *= pivot.clone();
        for i in (k + 1)..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = m[i][k].clone() / pivot.clone();
            for j in k..n {
                let sub = f.clone() * m[k][j].clone();
                m[i][j] -= sub;
            }
        }
    }
    det
}

/// Determinant of a float matrix by LU with partial pivoting.
pub fn det_f64(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let mut det = 1.0f64;
    for k in 0..n {
        let mut p = k;
        for i in (k + 1)..n {
            if m[i][k].abs() > m[p][k].abs() {
                p = i;
            }
        }
        if m[p][k] == 0.0 {
            return 0.0;
        }
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        det *= m[k][k];
        for i in (k + 1)..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                m[i][j] -= f * m[k][j];
            }
        }
    }
    det
}

/// The tail mass `π^{−1/2} ∫_x^∞ e^{−z²/4} dz` by adaptive quadrature.
///
/// Reference route for the closed-form evaluator; accurate to roughly
/// 1e−13 absolute for |x| ≤ 10.
pub fn hit_probability_by_quadrature(x: f64) -> f64 {
    let integrand = |z: f64| (-z * z / 4.0).exp() / std::f64::consts::PI.sqrt();
    // e^{-z²/4} < 1e-180 beyond z = 41, far below the tolerance
    let upper = x.abs().max(8.0) + 41.0;
    if x >= 0.0 {
        quad::integrate(&integrand, x, upper, 1e-14).expect("quadrature converges")
    } else {
        // F(x) + F(−x) = 2
        2.0 - hit_probability_by_quadrature(-x)
    }
}
