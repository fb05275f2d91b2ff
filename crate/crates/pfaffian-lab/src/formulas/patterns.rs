//! Interval-pattern probabilities under the maximal entrance law.
//!
//! With endpoints `x_1 < … < x_2n` and intervals `I_k = (x_k, x_{k+1})`,
//! every supported pattern probability is a Pfaffian built from the matrix
//! `F_ij = F(t^{−1/2}(x_j − x_i))` and one of three constant antisymmetric
//! masks: all-ones `I`, the block diagonal `O`, and the shifted block
//! diagonal `Ô`.

use crate::pfaffian::{pf, SkewMatrix};
use crate::points::OrderedPoints;
use crate::Model;

use super::erf_family;
use super::FormulaError;

/// Largest endpoint count accepted (matrix dimension for the Pfaffians).
const MAX_ENDPOINTS: usize = 24;

/// Which interval event is requested, in terms of the odd/even intervals
/// `I_1, …, I_{2n−1}` between consecutive endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pattern {
    /// Odd-indexed intervals all empty. For the annihilating model the same
    /// Pfaffian evaluates the parity functional `E[(−1)^{N(I_1 ∪ I_3 ∪ …)}]`,
    /// which coincides with the coalescing empty-interval probability.
    AlternateEmpty,
    /// Every interval contains at least one particle (coalescing).
    AllOccupied,
    /// Every interval contains an odd number of particles (annihilating).
    AllOdd,
    /// Odd-indexed intervals all occupied (coalescing).
    AlternateOccupied,
    /// Odd-indexed intervals empty and even-indexed occupied (coalescing).
    EmptyOccupiedMixed,
}

impl Pattern {
    pub fn as_str(&self) -> &'static str {
        match self {
            Pattern::AlternateEmpty => "alternate-empty",
            Pattern::AllOccupied => "all-occupied",
            Pattern::AllOdd => "all-odd",
            Pattern::AlternateOccupied => "alternate-occupied",
            Pattern::EmptyOccupiedMixed => "empty-occupied-mixed",
        }
    }

    fn supports(&self, model: Model) -> bool {
        match self {
            Pattern::AlternateEmpty => true,
            Pattern::AllOdd => model == Model::Annihilating,
            _ => model == Model::Coalescing,
        }
    }
}

/// A validated pattern query.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternSpec {
    endpoints: OrderedPoints,
    pattern: Pattern,
    t: f64,
    model: Model,
}

impl PatternSpec {
    pub fn new(
        endpoints: OrderedPoints,
        pattern: Pattern,
        t: f64,
        model: Model,
    ) -> Result<Self, FormulaError> {
        if !(t > 0.0) {
            return Err(FormulaError::NonpositiveTime(t));
        }
        let count = endpoints.len();
        if count % 2 != 0 {
            return Err(FormulaError::OddPointCount(count));
        }
        if count > MAX_ENDPOINTS {
            return Err(FormulaError::DimensionTooLarge {
                dim: count,
                max: MAX_ENDPOINTS,
            });
        }
        if !pattern.supports(model) {
            return Err(FormulaError::UnsupportedPatternModelCombination {
                pattern: pattern.as_str(),
                model,
            });
        }
        Ok(PatternSpec {
            endpoints,
            pattern,
            t,
            model,
        })
    }

    pub fn endpoints(&self) -> &OrderedPoints {
        &self.endpoints
    }

    pub fn pattern(&self) -> Pattern {
        self.pattern
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn model(&self) -> Model {
        self.model
    }
}

/// `F_ij = F(t^{−1/2}(x_j − x_i))` above the diagonal.
pub(crate) fn f_matrix(endpoints: &OrderedPoints, t: f64) -> SkewMatrix<f64> {
    let s = t.powf(-0.5);
    let xs = endpoints.coords();
    SkewMatrix::from_upper(xs.len(), |i, j| erf_family::f((xs[j] - xs[i]) * s))
}

/// All-ones mask: `1` above the diagonal; `Pf = 1`.
fn ones_mask(dim: usize) -> SkewMatrix<f64> {
    SkewMatrix::from_upper(dim, |_, _| 1.0)
}

/// Block diagonal mask: 2×2 blocks `[[0,1],[−1,0]]` at (1,2), (3,4), ….
fn block_diag_mask(dim: usize) -> SkewMatrix<f64> {
    SkewMatrix::from_upper(dim, |i, j| if j == i + 1 && i % 2 == 0 { 1.0 } else { 0.0 })
}

/// Shifted block diagonal mask: the same 2×2 blocks at (2,3), (4,5), …;
/// degenerates to the zero matrix in dimension 2.
fn shifted_block_mask(dim: usize) -> SkewMatrix<f64> {
    SkewMatrix::from_upper(dim, |i, j| if j == i + 1 && i % 2 == 1 { 1.0 } else { 0.0 })
}

/// Evaluates the requested pattern probability.
pub fn pattern_probability(spec: &PatternSpec) -> Result<f64, FormulaError> {
    let dim = spec.endpoints.len();
    let fm = f_matrix(&spec.endpoints, spec.t);
    let value = match spec.pattern {
        Pattern::AlternateEmpty => pf(&fm)?,
        Pattern::AllOccupied => pf(&ones_mask(dim).try_sub(&fm)?)?,
        Pattern::AllOdd => {
            let base = pf(&ones_mask(dim).try_sub(&fm)?)?;
            (2.0f64).powi(1 - dim as i32) * base
        }
        Pattern::AlternateOccupied => pf(&block_diag_mask(dim).try_sub(&fm)?)?,
        Pattern::EmptyOccupiedMixed => pf(&fm.try_sub(&shifted_block_mask(dim))?)?,
    };
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(pattern: Pattern, endpoints: Vec<f64>, t: f64, model: Model) -> PatternSpec {
        PatternSpec::new(OrderedPoints::new(endpoints).unwrap(), pattern, t, model).unwrap()
    }

    #[test]
    fn two_point_alternate_empty() {
        let v = pattern_probability(&spec(
            Pattern::AlternateEmpty,
            vec![0.0, 1.0],
            1.0,
            Model::Coalescing,
        ))
        .unwrap();
        assert!((v - 0.4795001221869535).abs() < 1e-15);
    }

    #[test]
    fn four_point_alternate_empty() {
        // Pf(F) = F(1)² − F(2)² + F(3)F(1)
        let v = pattern_probability(&spec(
            Pattern::AlternateEmpty,
            vec![0.0, 1.0, 2.0, 3.0],
            1.0,
            Model::Coalescing,
        ))
        .unwrap();
        assert!((v - 0.22142991304525222).abs() < 1e-14, "{v}");
        // same Pfaffian evaluates the annihilating parity functional
        let ann = pattern_probability(&spec(
            Pattern::AlternateEmpty,
            vec![0.0, 1.0, 2.0, 3.0],
            1.0,
            Model::Annihilating,
        ))
        .unwrap();
        assert_eq!(v, ann);
    }

    #[test]
    fn frozen_four_point_values() {
        let pts = vec![0.0, 1.0, 2.0, 3.0];
        let cases = [
            (Pattern::AllOccupied, Model::Coalescing, 0.06363310706027298),
            (Pattern::AllOdd, Model::Annihilating, 0.007954138382534122),
            (Pattern::AlternateOccupied, Model::Coalescing, 0.26242966867134526),
            (Pattern::EmptyOccupiedMixed, Model::Coalescing, 0.18753505952056299),
        ];
        for (pattern, model, want) in cases {
            let v = pattern_probability(&spec(pattern, pts.clone(), 1.0, model)).unwrap();
            assert!((v - want).abs() < 1e-13, "{pattern:?}: {v} vs {want}");
        }
    }

    #[test]
    fn mixed_degenerates_to_empty_at_two_points() {
        // Ô is empty in dimension 2, so the mixed pattern reduces to Pf(F)
        let mixed = pattern_probability(&spec(
            Pattern::EmptyOccupiedMixed,
            vec![0.0, 1.0],
            1.0,
            Model::Coalescing,
        ))
        .unwrap();
        assert!((mixed - 0.4795001221869535).abs() < 1e-15);
    }

    #[test]
    fn occupied_complements_empty_at_two_points() {
        let e = pattern_probability(&spec(
            Pattern::AlternateEmpty,
            vec![-0.5, 2.0],
            0.7,
            Model::Coalescing,
        ))
        .unwrap();
        let o = pattern_probability(&spec(
            Pattern::AllOccupied,
            vec![-0.5, 2.0],
            0.7,
            Model::Coalescing,
        ))
        .unwrap();
        assert!((e + o - 1.0).abs() < 1e-15);
    }

    #[test]
    fn validation_errors() {
        let pts = OrderedPoints::new(vec![0.0, 1.0, 2.0]).unwrap();
        assert!(matches!(
            PatternSpec::new(pts, Pattern::AlternateEmpty, 1.0, Model::Coalescing),
            Err(FormulaError::OddPointCount(3))
        ));
        let pts = OrderedPoints::new(vec![0.0, 1.0]).unwrap();
        assert!(matches!(
            PatternSpec::new(pts.clone(), Pattern::AllOdd, 1.0, Model::Coalescing),
            Err(FormulaError::UnsupportedPatternModelCombination { .. })
        ));
        assert!(matches!(
            PatternSpec::new(pts.clone(), Pattern::AllOccupied, 1.0, Model::Annihilating),
            Err(FormulaError::UnsupportedPatternModelCombination { .. })
        ));
        assert!(matches!(
            PatternSpec::new(pts, Pattern::AlternateEmpty, 0.0, Model::Coalescing),
            Err(FormulaError::NonpositiveTime(_))
        ));
    }
}
