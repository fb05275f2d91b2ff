use std::ops::{Neg, Sub};

use num_traits::{One, Zero};

use super::PfaffianError;

/// Scalar ring the Pfaffian algorithms are generic over.
///
/// Blanket-implemented; the two instantiations used in this crate are
/// `f64` and `num::BigRational`.
pub trait Ring:
    Clone + PartialEq + Zero + One + Neg<Output = Self> + Sub<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone + PartialEq + Zero + One + Neg<Output = Self> + Sub<Output = Self>
{
}

/// Relative asymmetry above which float input is rejected instead of
/// silently symmetrized.
const ASYMMETRY_REJECT: f64 = 1e-9;

/// Dense antisymmetric square matrix.
///
/// Entries satisfy `a[j][i] == -a[i][j]` and `a[i][i] == 0`; every
/// constructor either enforces this exactly or (for floats) symmetrizes
/// round-off-level asymmetry and rejects anything worse.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewMatrix<T> {
    dim: usize,
    entries: Vec<T>,
}

impl<T: Ring> SkewMatrix<T> {
    /// Zero matrix of the given dimension (dimension 0 is allowed; its
    /// Pfaffian is 1 by convention).
    pub fn zero(dim: usize) -> Self {
        SkewMatrix {
            dim,
            entries: vec![T::zero(); dim * dim],
        }
    }

    /// Builds the matrix from its strict upper triangle; the lower triangle
    /// and diagonal are filled in so antisymmetry holds by construction.
    pub fn from_upper(dim: usize, mut upper: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = SkewMatrix::zero(dim);
        for i in 0..dim {
            for j in (i + 1)..dim {
                let v = upper(i, j);
                m.entries[j * dim + i] = -v.clone();
                m.entries[i * dim + j] = v;
            }
        }
        m
    }

    /// Builds from full rows, requiring exact antisymmetry.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, PfaffianError> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(PfaffianError::NotAntisymmetric(
                "rows do not form a square matrix".into(),
            ));
        }
        for i in 0..dim {
            if !rows[i][i].is_zero() {
                return Err(PfaffianError::NotAntisymmetric(format!(
                    "nonzero diagonal at index {i}"
                )));
            }
            for j in (i + 1)..dim {
                if rows[j][i] != -rows[i][j].clone() {
                    return Err(PfaffianError::NotAntisymmetric(format!(
                        "entries ({i},{j}) and ({j},{i}) are not negations"
                    )));
                }
            }
        }
        Ok(SkewMatrix {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.dim + j]
    }

    /// Principal minor on the given index set.
    ///
    /// Indices are treated as a set: they are sorted and deduplicated, so
    /// the result is always a genuine principal submatrix. The empty set
    /// yields the 0×0 matrix whose Pfaffian is 1.
    pub fn submatrix(&self, indices: &[usize]) -> Result<SkewMatrix<T>, PfaffianError> {
        let mut keep: Vec<usize> = indices.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&bad) = keep.iter().find(|&&i| i >= self.dim) {
            return Err(PfaffianError::IndexOutOfRange {
                index: bad,
                dim: self.dim,
            });
        }
        let k = keep.len();
        let mut entries = Vec::with_capacity(k * k);
        for &i in &keep {
            for &j in &keep {
                entries.push(self.get(i, j).clone());
            }
        }
        Ok(SkewMatrix { dim: k, entries })
    }

    /// Entrywise sum; antisymmetry is preserved.
    pub fn try_add(&self, other: &Self) -> Result<SkewMatrix<T>, PfaffianError> {
        if self.dim != other.dim {
            return Err(PfaffianError::DimensionMismatch(self.dim, other.dim));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Ok(SkewMatrix {
            dim: self.dim,
            entries,
        })
    }

    /// Entrywise difference; antisymmetry is preserved.
    pub fn try_sub(&self, other: &Self) -> Result<SkewMatrix<T>, PfaffianError> {
        if self.dim != other.dim {
            return Err(PfaffianError::DimensionMismatch(self.dim, other.dim));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        Ok(SkewMatrix {
            dim: self.dim,
            entries,
        })
    }

    /// Congruence scaling `a_ij ↦ λ_i λ_j a_ij`.
    pub fn scale_congruence<F>(&self, lambda: F) -> SkewMatrix<T>
    where
        F: Fn(usize) -> T,
    {
        let dim = self.dim;
        SkewMatrix::from_upper(dim, |i, j| {
            lambda(i) * lambda(j) * self.get(i, j).clone()
        })
    }
}

impl SkewMatrix<f64> {
    /// Builds from full float rows, symmetrizing as `(A − Aᵀ)/2`.
    ///
    /// Asymmetry up to `1e-9·max|entry|` is absorbed as round-off; anything
    /// larger is treated as a logic error in the caller and rejected.
    pub fn from_rows_symmetrized(rows: Vec<Vec<f64>>) -> Result<Self, PfaffianError> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(PfaffianError::NotAntisymmetric(
                "rows do not form a square matrix".into(),
            ));
        }
        let scale = rows
            .iter()
            .flatten()
            .fold(0.0f64, |acc, v| acc.max(v.abs()));
        let tol = ASYMMETRY_REJECT * scale;
        let mut worst = 0.0f64;
        for i in 0..dim {
            worst = worst.max(rows[i][i].abs());
            for j in (i + 1)..dim {
                worst = worst.max((rows[i][j] + rows[j][i]).abs());
            }
        }
        if worst > tol && scale > 0.0 {
            return Err(PfaffianError::NotAntisymmetric(format!(
                "asymmetry {worst:.3e} exceeds {tol:.3e}"
            )));
        }
        Ok(SkewMatrix::from_upper(dim, |i, j| {
            0.5 * (rows[i][j] - rows[j][i])
        }))
    }

    /// Largest entry magnitude (0 for the empty matrix).
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigRational;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn from_upper_is_antisymmetric() {
        let m = SkewMatrix::from_upper(4, |i, j| (i * 10 + j) as f64);
        for i in 0..4 {
            assert_eq!(*m.get(i, i), 0.0);
            for j in 0..4 {
                assert_eq!(*m.get(i, j), -*m.get(j, i));
            }
        }
    }

    #[test]
    fn from_rows_rejects_asymmetry() {
        let rows = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        assert!(SkewMatrix::from_rows(rows.clone()).is_err());
        assert!(SkewMatrix::from_rows_symmetrized(rows).is_err());
    }

    #[test]
    fn symmetrization_absorbs_roundoff() {
        let eps = 1e-13;
        let rows = vec![vec![0.0, 1.0 + eps], vec![-1.0, 0.0]];
        let m = SkewMatrix::from_rows_symmetrized(rows).unwrap();
        assert!((m.get(0, 1) - 1.0).abs() < 1e-12);
        assert_eq!(*m.get(0, 1), -*m.get(1, 0));
    }

    #[test]
    fn exact_rows_roundtrip() {
        let rows = vec![
            vec![rat(0, 1), rat(1, 2)],
            vec![rat(-1, 2), rat(0, 1)],
        ];
        let m = SkewMatrix::from_rows(rows).unwrap();
        assert_eq!(*m.get(0, 1), rat(1, 2));
    }

    #[test]
    fn submatrix_full_and_empty() {
        let m = SkewMatrix::from_upper(6, |i, j| (i + j) as f64);
        assert_eq!(m.submatrix(&[0, 1, 2, 3, 4, 5]).unwrap(), m);
        assert_eq!(m.submatrix(&[]).unwrap().dim(), 0);
        assert!(matches!(
            m.submatrix(&[0, 6]),
            Err(PfaffianError::IndexOutOfRange { index: 6, dim: 6 })
        ));
    }

    #[test]
    fn submatrix_of_ones_pattern() {
        // picking odd-spaced indices out of the all-ones pattern keeps the pattern
        let m = SkewMatrix::from_upper(6, |_, _| 1.0);
        let s = m.submatrix(&[0, 2, 4]).unwrap();
        assert_eq!(s.dim(), 3);
        for i in 0..3 {
            for j in (i + 1)..3 {
                assert_eq!(*s.get(i, j), 1.0);
            }
        }
    }
}
