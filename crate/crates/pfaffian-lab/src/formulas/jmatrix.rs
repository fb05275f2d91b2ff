//! The constant antisymmetric matrix governing the small-separation limit
//! of Pfaffians with entries `φ(y_j − y_i)`, `φ(z) = z e^{−z²/4}`.
//!
//! Entries are exact rationals
//! `J_ij = (−1)^{i−1} φ^{(i+j−2)}(0) / ((i−1)!(j−1)!)` in 1-based indices.
//! The sign sits on the row index: that is the convention forced by the
//! Taylor rearrangement `φ(y_j−y_i) = Σ y_i^{l−1} y_j^{k−1} J_lk`, and the
//! only one under which the 2×2 limit equals `φ′(0) = +1` as the direct
//! ratio computation requires. Since φ is odd, `J_ij = 0` whenever `i+j`
//! is even.

use num::{BigInt, BigRational};
use num_traits::{ToPrimitive, Zero};

use crate::pfaffian::{pf_expand, SkewMatrix};

use super::FormulaError;

/// Largest pair count accepted (dimension 16 exact Pfaffian).
const MAX_PAIRS: usize = 8;

/// Odd-order Taylor derivative `φ^{(2k+1)}(0) = (−1)^k (2k+1)!/(4^k k!)`;
/// even orders vanish.
pub fn phi_taylor_derivative(order: usize) -> BigRational {
    if order % 2 == 0 {
        return BigRational::zero();
    }
    let k = (order - 1) / 2;
    let numer = factorial(order);
    let denom = BigInt::from(4u32).pow(k as u32) * factorial(k);
    let value = BigRational::new(numer, denom);
    if k % 2 == 0 {
        value
    } else {
        -value
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1u32), |acc, k| acc * BigInt::from(k))
}

/// Exact 2n×2n limit matrix together with the φ derivatives it was built
/// from and its exact Pfaffian.
#[derive(Debug, Clone, PartialEq)]
pub struct JMatrix {
    n_pairs: usize,
    entries: SkewMatrix<BigRational>,
    phi_derivatives: Vec<BigRational>,
    pfaffian: BigRational,
}

impl JMatrix {
    pub fn dim(&self) -> usize {
        2 * self.n_pairs
    }

    pub fn entries(&self) -> &SkewMatrix<BigRational> {
        &self.entries
    }

    /// Odd-order derivatives `φ^{(1)}(0), φ^{(3)}(0), …, φ^{(4n−3)}(0)`.
    pub fn phi_derivatives(&self) -> &[BigRational] {
        &self.phi_derivatives
    }

    pub fn pfaffian(&self) -> &BigRational {
        &self.pfaffian
    }

    pub fn pfaffian_f64(&self) -> f64 {
        self.pfaffian.to_f64().expect("pfaffian fits in f64")
    }

    pub fn entry_f64(&self, i: usize, j: usize) -> f64 {
        self.entries.get(i, j).to_f64().expect("entry fits in f64")
    }
}

/// Builds the exact limit matrix for `n` pairs (dimension `2n ≤ 16`).
pub fn j_matrix(n_pairs: usize) -> Result<JMatrix, FormulaError> {
    if n_pairs == 0 || n_pairs > MAX_PAIRS {
        return Err(FormulaError::DimensionTooLarge {
            dim: 2 * n_pairs,
            max: 2 * MAX_PAIRS,
        });
    }
    let dim = 2 * n_pairs;
    // highest order needed is (2n−1) + 2n − 2 = 4n − 3
    let phi_derivatives: Vec<BigRational> = (0..2 * n_pairs)
        .map(|k| phi_taylor_derivative(2 * k + 1))
        .collect();
    let entries = SkewMatrix::from_upper(dim, |i0, j0| {
        // 1-based formula with the sign on the row index
        let (i, j) = (i0 + 1, j0 + 1);
        let order = i + j - 2;
        if order % 2 == 0 {
            return BigRational::zero();
        }
        let value = phi_taylor_derivative(order)
            / BigRational::from(factorial(i - 1) * factorial(j - 1));
        if (i - 1) % 2 == 0 {
            value
        } else {
            -value
        }
    });
    let pfaffian = pf_expand(&entries, 0)?;
    Ok(JMatrix {
        n_pairs,
        entries,
        phi_derivatives,
        pfaffian,
    })
}
