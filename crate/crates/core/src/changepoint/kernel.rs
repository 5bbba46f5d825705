//! RBF kernel segment cost with precomputed Gram prefix sums.

use crate::error::{Error, Result};

/// Segment cost C(a, b) = (b − a) − S(a, b) / (b − a), where S is the sum of
/// k(x_i, x_j) = exp(−γ (x_i − x_j)²) over [a, b)². Zero on constant
/// segments, non-negative everywhere.
#[derive(Debug, Clone)]
pub struct RbfCost {
    gamma: f64,
    /// prefix[i * (t + 1) + j] = Σ_{u<i, v<j} k(x_u, x_v).
    prefix: Vec<f64>,
    t: usize,
}

impl RbfCost {
    /// γ is the median heuristic: 1 / median of the non-zero pairwise
    /// squared differences, or 1.0 when all values are equal.
    pub fn new(values: &[f64]) -> Result<Self> {
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteValue(i));
            }
        }
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        let gamma = median_heuristic(values);
        let t = values.len();
        let side = t + 1;
        let mut prefix = vec![0.0; side * side];
        for i in 1..side {
            for j in 1..side {
                let k = (-gamma * (values[i - 1] - values[j - 1]).powi(2)).exp();
                prefix[i * side + j] = k + prefix[(i - 1) * side + j] + prefix[i * side + j - 1]
                    - prefix[(i - 1) * side + j - 1];
            }
        }
        Ok(RbfCost { gamma, prefix, t })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn len(&self) -> usize {
        self.t
    }

    pub fn is_empty(&self) -> bool {
        self.t == 0
    }

    /// Cost of the half-open segment [a, b); requires a < b ≤ len.
    pub fn segment_cost(&self, a: usize, b: usize) -> f64 {
        debug_assert!(a < b && b <= self.t);
        let side = self.t + 1;
        let gram = self.prefix[b * side + b] - 2.0 * self.prefix[a * side + b]
            + self.prefix[a * side + a];
        let len = (b - a) as f64;
        (len - gram / len).max(0.0)
    }
}

/// 1 / median of non-zero pairwise squared differences; 1.0 for constants.
/// The median of an even count is the mean of the two central values.
fn median_heuristic(values: &[f64]) -> f64 {
    let mut diffs = Vec::new();
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            let d = (values[i] - values[j]).powi(2);
            if d > 0.0 {
                diffs.push(d);
            }
        }
    }
    if diffs.is_empty() {
        return 1.0;
    }
    diffs.sort_by(|a, b| a.total_cmp(b));
    let n = diffs.len();
    let median = if n % 2 == 1 {
        diffs[n / 2]
    } else {
        (diffs[n / 2 - 1] + diffs[n / 2]) / 2.0
    };
    1.0 / median
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_segment_costs_zero() {
        let cost = RbfCost::new(&[3.0; 6]).unwrap();
        assert_eq!(cost.gamma(), 1.0);
        assert!(cost.segment_cost(0, 6).abs() < 1e-12);
        assert!(cost.segment_cost(2, 4).abs() < 1e-12);
    }

    #[test]
    fn costs_are_non_negative_and_split_helps() {
        let values = [0.0, 0.1, -0.1, 5.0, 5.2, 4.9];
        let cost = RbfCost::new(&values).unwrap();
        let whole = cost.segment_cost(0, 6);
        let split = cost.segment_cost(0, 3) + cost.segment_cost(3, 6);
        assert!(whole >= 0.0);
        assert!(split <= whole);
    }

    #[test]
    fn gamma_median_even_count() {
        // Pairwise squared diffs of [0, 1, 3]: 1, 9, 4 → median 4 → γ = 0.25.
        let cost = RbfCost::new(&[0.0, 1.0, 3.0]).unwrap();
        assert!((cost.gamma() - 0.25).abs() < 1e-12);
        // [0, 2]: single diff 4 → γ = 0.25.
        let cost = RbfCost::new(&[0.0, 2.0]).unwrap();
        assert!((cost.gamma() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn single_point_segment_costs_zero() {
        let cost = RbfCost::new(&[1.0, 7.0, -2.0]).unwrap();
        for a in 0..3 {
            assert!(cost.segment_cost(a, a + 1).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_finite() {
        assert!(matches!(
            RbfCost::new(&[1.0, f64::NAN]),
            Err(Error::NonFiniteValue(1))
        ));
    }
}
