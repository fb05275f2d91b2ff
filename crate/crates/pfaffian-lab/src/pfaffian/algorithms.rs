use super::matrix::{Ring, SkewMatrix};
use super::pairing::{crossing_sign, Pairing};
use super::PfaffianError;

/// Largest dimension accepted by the enumeration oracle (10 395 pairings).
pub(crate) const ENUMERATE_MAX_DIM: usize = 12;
/// Largest dimension accepted by the sum decomposition (2^dim subsets).
const SUM_EXPAND_MAX_DIM: usize = 10;
/// Dimension above which [`pf`] switches from exact expansion to the
/// pivoted O(dim³) reduction.
const EXPAND_CUTOFF_DIM: usize = 12;
/// A pivot column whose largest entry falls below this fraction of the
/// input scale is treated as numerically null (singular matrix, Pfaffian 0).
const NULL_PIVOT_REL: f64 = 1e-13;

/// Pfaffian by definition: signed sum over all perfect matchings.
///
/// Exact when `T` is an exact scalar. Guarded to dimension 12; this is the
/// oracle the other algorithms are checked against.
pub fn pf_enumerate<T: Ring>(a: &SkewMatrix<T>) -> Result<T, PfaffianError> {
    let dim = a.dim();
    let mut acc = T::zero();
    for pairing in Pairing::enumerate(dim)? {
        let mut term = T::one();
        for &(i, j) in pairing.pairs() {
            term = term * a.get(i, j).clone();
        }
        if crossing_sign(&pairing) < 0 {
            term = -term;
        }
        acc = acc + term;
    }
    Ok(acc)
}

/// Pfaffian by recursive expansion along a row.
///
/// `row` selects the top-level expansion row; the value is independent of
/// the choice. Exact when `T` is an exact scalar; cost grows as the double
/// factorial of the dimension, so keep exact use below ~16.
pub fn pf_expand<T: Ring>(a: &SkewMatrix<T>, row: usize) -> Result<T, PfaffianError> {
    let dim = a.dim();
    if dim % 2 != 0 {
        return Err(PfaffianError::OddDimension(dim));
    }
    if dim == 0 {
        return Ok(T::one());
    }
    if row >= dim {
        return Err(PfaffianError::IndexOutOfRange { index: row, dim });
    }
    debug_assert!(dim <= 64, "mask recursion limited to 64 indices");
    let full: u64 = if dim == 64 { !0 } else { (1u64 << dim) - 1 };
    let mut acc = T::zero();
    let rest = full & !(1u64 << row);
    let mut m = rest;
    while m != 0 {
        let j = m.trailing_zeros() as usize;
        m &= m - 1;
        // sign (−1)^{i+j+1} in 1-based indices, for the upper-triangle
        // entry a_{min,max}; expanding with a[row][j] directly absorbs an
        // extra −1 whenever j < row.
        let entry = a.get(row.min(j), row.max(j));
        if entry.is_zero() {
            continue;
        }
        let negative = (row + j) % 2 == 0;
        let sub = expand_rec(a, rest & !(1u64 << j));
        let term = entry.clone() * sub;
        acc = if negative { acc - term } else { acc + term };
    }
    Ok(acc)
}

/// Expansion along the lowest active index of the masked principal minor.
fn expand_rec<T: Ring>(a: &SkewMatrix<T>, active: u64) -> T {
    if active == 0 {
        return T::one();
    }
    let i = active.trailing_zeros() as usize;
    let rest = active & !(1u64 << i);
    let mut acc = T::zero();
    let mut m = rest;
    let mut negative = false; // sign alternates with j's rank among the rest
    while m != 0 {
        let j = m.trailing_zeros() as usize;
        m &= m - 1;
        let entry = a.get(i, j);
        if !entry.is_zero() {
            let term = entry.clone() * expand_rec(a, rest & !(1u64 << j));
            acc = if negative { acc - term } else { acc + term };
        }
        negative = !negative;
    }
    acc
}

/// Pfaffian via congruence to skew tridiagonal form with partial pivoting.
///
/// Each 2×2 step pivots on the largest-magnitude candidate in the working
/// column, folds the swap sign into the running result, and eliminates the
/// rest of the column with a unit congruence (determinant 1, so the
/// Pfaffian is unchanged). Returns 0.0 when a pivot column is numerically
/// null, i.e. the matrix is singular to working precision.
pub fn pf_stable(a: &SkewMatrix<f64>) -> Result<f64, PfaffianError> {
    let n = a.dim();
    if n % 2 != 0 {
        return Err(PfaffianError::OddDimension(n));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let scale = a.max_abs();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let mut m: Vec<f64> = (0..n * n).map(|k| *a.get(k / n, k % n)).collect();
    let mut pfaff = 1.0f64;

    for k in (0..n - 1).step_by(2) {
        // pivot: largest |m[i][k]| below the diagonal
        let mut p = k + 1;
        let mut best = m[p * n + k].abs();
        for i in (k + 2)..n {
            let v = m[i * n + k].abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best <= NULL_PIVOT_REL * scale {
            return Ok(0.0);
        }
        if p != k + 1 {
            swap_rows_cols(&mut m, n, p, k + 1);
            pfaff = -pfaff;
        }
        let pivot = m[(k + 1) * n + k];
        pfaff *= m[k * n + k + 1];
        for i in (k + 2)..n {
            let f = m[i * n + k] / pivot;
            if f != 0.0 {
                for j in 0..n {
                    m[i * n + j] -= f * m[(k + 1) * n + j];
                }
                for j in 0..n {
                    m[j * n + i] -= f * m[j * n + k + 1];
                }
            }
        }
    }
    Ok(pfaff)
}

fn swap_rows_cols(m: &mut [f64], n: usize, a: usize, b: usize) {
    for j in 0..n {
        m.swap(a * n + j, b * n + j);
    }
    for i in 0..n {
        m.swap(i * n + a, i * n + b);
    }
}

/// Pfaffian of `A + B` by the subset decomposition
/// `Pf(A+B) = Σ_J (−1)^{|J|/2} (−1)^{s(J)} Pf(A|_J) Pf(B|_{J^c})`,
/// where the sum runs over even-size subsets and `s(J)` is the sum of the
/// 1-based indices in `J`.
///
/// Guarded to dimension 10 (2^10 subsets).
pub fn pf_sum_expand<T: Ring>(
    a: &SkewMatrix<T>,
    b: &SkewMatrix<T>,
) -> Result<T, PfaffianError> {
    let dim = a.dim();
    if dim != b.dim() {
        return Err(PfaffianError::DimensionMismatch(dim, b.dim()));
    }
    if dim % 2 != 0 {
        return Err(PfaffianError::OddDimension(dim));
    }
    if dim > SUM_EXPAND_MAX_DIM {
        return Err(PfaffianError::DimensionTooLarge {
            dim,
            max: SUM_EXPAND_MAX_DIM,
        });
    }
    let full: u64 = if dim == 0 { 0 } else { (1u64 << dim) - 1 };
    let mut acc = T::zero();
    for mask in 0..=full {
        let size = mask.count_ones() as usize;
        if size % 2 != 0 {
            continue;
        }
        // s(J) with 1-based indices: Σ_{j∈J} (j+1) = popcount + Σ 0-based
        let mut s = size;
        let mut mm = mask;
        while mm != 0 {
            s += mm.trailing_zeros() as usize;
            mm &= mm - 1;
        }
        let negative = (size / 2 + s) % 2 == 1;
        let term = expand_rec(a, mask) * expand_rec(b, full & !mask);
        if term.is_zero() {
            continue;
        }
        acc = if negative { acc - term } else { acc + term };
    }
    Ok(acc)
}

/// Float-path Pfaffian: exact expansion up to dimension 12, pivoted
/// reduction beyond.
pub fn pf(a: &SkewMatrix<f64>) -> Result<f64, PfaffianError> {
    if a.dim() <= EXPAND_CUTOFF_DIM {
        pf_expand(a, 0)
    } else {
        pf_stable(a)
    }
}
