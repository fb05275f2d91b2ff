use std::collections::BTreeMap;

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Result of a two-sample chi-square homogeneity test over categorical
/// observations.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquareTwoSample {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    /// Number of categories after pooling rare ones.
    pub categories: usize,
}

/// Two-sample chi-square homogeneity test.
///
/// `counts` maps each category to its observation counts `[n_a, n_b]` in
/// the two samples. Categories whose pooled expected count falls below
/// `min_expected` (the usual Cochran threshold is 5) are merged into a
/// single rest category; the B-Tree ordering makes pooling deterministic.
pub fn chi_square_two_sample<K: Ord>(
    counts: &BTreeMap<K, [u64; 2]>,
    min_expected: f64,
) -> ChiSquareTwoSample {
    let total_a: u64 = counts.values().map(|c| c[0]).sum();
    let total_b: u64 = counts.values().map(|c| c[1]).sum();
    let grand = (total_a + total_b) as f64;
    let share_a = total_a as f64 / grand;
    let share_b = total_b as f64 / grand;

    // pool categories whose smaller expected count is below threshold
    let mut kept: Vec<[u64; 2]> = Vec::new();
    let mut rest = [0u64; 2];
    for cell in counts.values() {
        let row = (cell[0] + cell[1]) as f64;
        if row * share_a.min(share_b) < min_expected {
            rest[0] += cell[0];
            rest[1] += cell[1];
        } else {
            kept.push(*cell);
        }
    }
    if rest[0] + rest[1] > 0 {
        kept.push(rest);
    }

    let mut statistic = 0.0;
    for cell in &kept {
        let row = (cell[0] + cell[1]) as f64;
        for (obs, share) in [(cell[0] as f64, share_a), (cell[1] as f64, share_b)] {
            let expected = row * share;
            if expected > 0.0 {
                let d = obs - expected;
                statistic += d * d / expected;
            }
        }
    }
    let categories = kept.len();
    let dof = categories.saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        let chi = ChiSquared::new(dof as f64).expect("positive dof");
        1.0 - chi.cdf(statistic)
    };
    ChiSquareTwoSample {
        statistic,
        degrees_of_freedom: dof,
        p_value,
        categories,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(rows: &[(&str, u64, u64)]) -> BTreeMap<String, [u64; 2]> {
        rows.iter()
            .map(|&(k, a, b)| (k.to_string(), [a, b]))
            .collect()
    }

    #[test]
    fn identical_samples_have_zero_statistic() {
        let t = table(&[("x", 50, 50), ("y", 30, 30), ("z", 20, 20)]);
        let r = chi_square_two_sample(&t, 5.0);
        assert!(r.statistic < 1e-12);
        assert!((r.p_value - 1.0).abs() < 1e-12);
        assert_eq!(r.degrees_of_freedom, 2);
    }

    #[test]
    fn grossly_different_samples_rejected() {
        let t = table(&[("x", 100, 10), ("y", 10, 100)]);
        let r = chi_square_two_sample(&t, 5.0);
        assert!(r.p_value < 1e-6, "p = {}", r.p_value);
    }

    #[test]
    fn rare_categories_pool() {
        let t = table(&[("x", 500, 480), ("y", 1, 0), ("z", 0, 2), ("w", 2, 1)]);
        let r = chi_square_two_sample(&t, 5.0);
        // x plus one pooled rest category
        assert_eq!(r.categories, 2);
        assert!(r.p_value > 0.05);
    }

    #[test]
    fn matches_textbook_example() {
        // 2×2 table: [[30, 20], [20, 30]]; chi-square = 4.0, df = 1
        let t = table(&[("a", 30, 20), ("b", 20, 30)]);
        let r = chi_square_two_sample(&t, 1.0);
        assert!((r.statistic - 4.0).abs() < 1e-12);
        assert_eq!(r.degrees_of_freedom, 1);
        // p = P(chi2_1 > 4) = erfc(sqrt(2)) ≈ 0.0455
        assert!((r.p_value - 0.04550026389635842).abs() < 1e-9);
    }
}
