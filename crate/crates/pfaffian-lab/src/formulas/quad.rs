//! Adaptive panel quadrature with nested Gauss–Legendre error estimation.
//!
//! Each panel is evaluated with 7-point and 15-point Gauss–Legendre rules;
//! the difference drives bisection, Gauss–Kronrod style. Nodes are computed
//! once by Newton iteration on the Legendre recurrence, so there are no
//! tabulated magic constants to get wrong.

use std::sync::OnceLock;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum QuadError {
    #[error("adaptive quadrature failed to reach the requested tolerance")]
    NonConvergence,
}

const MAX_DEPTH: usize = 60;

/// Legendre nodes and weights on [−1, 1] for the given order.
fn legendre_rule(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for k in 1..=n {
        // Chebyshev-style initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (k as f64 - 0.25) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_eval(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_eval(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.push((x, w));
    }
    rule
}

/// Evaluates (P_n(x), P_n'(x)) by the three-term recurrence.
fn legendre_eval(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for m in 2..=n {
        let mf = m as f64;
        let p2 = ((2.0 * mf - 1.0) * x * p1 - (mf - 1.0) * p0) / mf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn rules() -> &'static (Vec<(f64, f64)>, Vec<(f64, f64)>) {
    static RULES: OnceLock<(Vec<(f64, f64)>, Vec<(f64, f64)>)> = OnceLock::new();
    RULES.get_or_init(|| (legendre_rule(7), legendre_rule(15)))
}

fn panel(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let (lo_rule, hi_rule) = rules();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut lo = 0.0;
    for &(x, w) in lo_rule {
        lo += w * f(mid + half * x);
    }
    let mut hi = 0.0;
    for &(x, w) in hi_rule {
        hi += w * f(mid + half * x);
    }
    (hi * half, (hi - lo).abs() * half)
}

/// Integrates `f` over `[a, b]` to the given absolute tolerance.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol_abs: f64) -> Result<f64, QuadError> {
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return integrate(f, b, a, tol_abs).map(|v| -v);
    }
    integrate_rec(f, a, b, tol_abs.max(1e-300), 0)
}

fn integrate_rec(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    depth: usize,
) -> Result<f64, QuadError> {
    let (value, err) = panel(f, a, b);
    if err <= tol || (b - a) < 1e-15 * (a.abs() + b.abs() + 1.0) {
        return Ok(value);
    }
    if depth >= MAX_DEPTH {
        return Err(QuadError::NonConvergence);
    }
    let mid = 0.5 * (a + b);
    let left = integrate_rec(f, a, mid, 0.5 * tol, depth + 1)?;
    let right = integrate_rec(f, mid, b, 0.5 * tol, depth + 1)?;
    Ok(left + right)
}

/// Iterated 2D integral over the rectangle `[ulo, uhi] × [vlo, vhi]`.
///
/// The outer (u) direction is adaptive with the inner (v) integral evaluated
/// adaptively at every outer node; an inner failure poisons the whole
/// integral rather than silently degrading it.
pub fn integrate2d(
    f: &dyn Fn(f64, f64) -> f64,
    (ulo, uhi): (f64, f64),
    (vlo, vhi): (f64, f64),
    tol_abs: f64,
) -> Result<f64, QuadError> {
    use std::cell::Cell;
    let poisoned: Cell<bool> = Cell::new(false);
    let inner_tol = (tol_abs / (uhi - ulo).abs().max(1.0)) * 1e-2;
    let outer = |u: f64| -> f64 {
        match integrate(&|v| f(u, v), vlo, vhi, inner_tol) {
            Ok(val) => val,
            Err(_) => {
                poisoned.set(true);
                0.0
            }
        }
    };
    let result = integrate(&outer, ulo, uhi, tol_abs)?;
    if poisoned.get() {
        return Err(QuadError::NonConvergence);
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let f = |x: f64| 3.0 * x * x;
        let v = integrate(&f, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 8.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_tail() {
        // ∫_0^∞ e^{-x²} dx = √π/2
        let f = |x: f64| (-x * x).exp();
        let v = integrate(&f, 0.0, 30.0, 1e-13).unwrap();
        assert!((v - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn jump_discontinuity_converges() {
        let f = |x: f64| if x < std::f64::consts::FRAC_1_SQRT_2 { 1.0 } else { 0.0 };
        let v = integrate(&f, 0.0, 1.0, 1e-10).unwrap();
        assert!((v - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
    }

    #[test]
    fn oriented_interval() {
        let f = |x: f64| x;
        let v = integrate(&f, 1.0, 0.0, 1e-12).unwrap();
        assert!((v + 0.5).abs() < 1e-12);
    }

    #[test]
    fn two_dimensional_gaussian() {
        // ∫∫ e^{-(x²+y²)} over the plane = π
        let f = |x: f64, y: f64| (-(x * x + y * y)).exp();
        let v = integrate2d(&f, (-10.0, 10.0), (-10.0, 10.0), 1e-9).unwrap();
        assert!((v - std::f64::consts::PI).abs() < 1e-8);
    }
}
