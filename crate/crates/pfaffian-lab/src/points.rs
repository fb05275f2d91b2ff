//! Strictly increasing finite point configurations.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PointsError {
    #[error("point list must be non-empty")]
    Empty,
    #[error("coordinates must be finite, got {0}")]
    NonFinite(f64),
    #[error("coordinates must be strictly increasing: {0} followed by {1}")]
    NotIncreasing(f64, f64),
}

/// A strictly increasing list of real coordinates.
///
/// Serves both as a point of the ordered cell `x_1 < … < x_n` at which
/// densities are evaluated and as a list of interval endpoints `a_1 < … < a_2m`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedPoints {
    coords: Vec<f64>,
}

impl OrderedPoints {
    pub fn new(coords: Vec<f64>) -> Result<Self, PointsError> {
        if coords.is_empty() {
            return Err(PointsError::Empty);
        }
        for w in coords.windows(2) {
            if w[1] <= w[0] {
                return Err(PointsError::NotIncreasing(w[0], w[1]));
            }
        }
        if let Some(&bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(PointsError::NonFinite(bad));
        }
        Ok(OrderedPoints { coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Applies `x ↦ scale·x + shift` to every coordinate.
    ///
    /// Requires `scale > 0` so the ordering is preserved.
    pub fn affine(&self, scale: f64, shift: f64) -> Result<Self, PointsError> {
        OrderedPoints::new(self.coords.iter().map(|x| scale * x + shift).collect())
    }
}

impl std::ops::Index<usize> for OrderedPoints {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

impl TryFrom<Vec<f64>> for OrderedPoints {
    type Error = PointsError;

    fn try_from(v: Vec<f64>) -> Result<Self, PointsError> {
        OrderedPoints::new(v)
    }
}
