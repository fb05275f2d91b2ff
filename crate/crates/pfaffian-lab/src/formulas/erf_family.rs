//! The hitting-probability profile `F` and its derivatives.
//!
//! `F(x) = π^{−1/2} ∫_x^∞ e^{−z²/4} dz = erfc(x/2)` is the probability that
//! two independent standard Brownian motions started a scaled distance `x`
//! apart meet within the reference time. Everything the closed-form
//! machinery evaluates is built from `F`, `F′`, `F″` and the odd factor
//! `φ(z) = z e^{−z²/4}` (note `F″ = (4π)^{−1/2} φ`).

use std::f64::consts::PI;

use super::special::erfc;

/// `F(x) = erfc(x/2)`.
pub fn f(x: f64) -> f64 {
    erfc(0.5 * x)
}

/// `F′(x) = −π^{−1/2} e^{−x²/4}`.
pub fn f_prime(x: f64) -> f64 {
    -(-x * x / 4.0).exp() / PI.sqrt()
}

/// `F″(x) = (4π)^{−1/2} φ(x)`.
pub fn f_second(x: f64) -> f64 {
    phi(x) / (4.0 * PI).sqrt()
}

/// `φ(z) = z e^{−z²/4}`.
pub fn phi(z: f64) -> f64 {
    z * (-z * z / 4.0).exp()
}

/// All four evaluations at once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FFamily {
    pub f: f64,
    pub f_prime: f64,
    pub f_second: f64,
    pub phi: f64,
}

pub fn f_family(x: f64) -> FFamily {
    FFamily {
        f: f(x),
        f_prime: f_prime(x),
        f_second: f_second(x),
        phi: phi(x),
    }
}
