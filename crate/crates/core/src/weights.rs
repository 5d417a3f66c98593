//! Points on the probability simplex used to weight family members.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::MAX_INDUCED_WEIGHT;

/// Nonnegative weights summing to one within `1e-12`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    weights: Vec<f64>,
}

impl WeightVector {
    /// Validates entries and renormalizes deviations from unit sum up to
    /// `1e-9`; worse violations are rejected.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let mut weights = weights;
        for w in weights.iter_mut() {
            if !w.is_finite() || *w < -1e-12 || *w > 1.0 + 1e-12 {
                return Err(Error::InvalidProbability {
                    value: *w,
                    context: "WeightVector",
                });
            }
            *w = w.clamp(0.0, 1.0);
        }
        let sum: f64 = weights.iter().sum();
        if math::abs(sum - 1.0) > 1e-9 {
            return Err(Error::NotNormalized { sum });
        }
        for w in weights.iter_mut() {
            *w /= sum;
        }
        Ok(Self { weights })
    }

    pub fn uniform(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptyFamily);
        }
        Ok(Self {
            weights: alloc::vec![1.0 / len as f64; len],
        })
    }

    /// All mass on one index.
    pub fn delta(len: usize, index: usize) -> Result<Self> {
        if len == 0 || index >= len {
            return Err(Error::InvalidParameter {
                context: "delta weight index",
            });
        }
        let mut weights = alloc::vec![0.0; len];
        weights[index] = 1.0;
        Ok(Self { weights })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn get(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn max_weight(&self) -> f64 {
        self.weights.iter().fold(0.0, |a, &b| a.max(b))
    }

    /// Whether every weight respects the `1 - 1/e` hedging bound, up to
    /// `tol`. Meaningful when all weighted members are distinct extreme
    /// points of their convex hull.
    pub fn satisfies_shulman_bound(&self, tol: f64) -> bool {
        self.max_weight() <= MAX_INDUCED_WEIGHT + tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn uniform_sums_to_one() {
        let w = WeightVector::uniform(3).unwrap();
        assert_eq!(w.weights(), &[1.0 / 3.0; 3]);
    }

    #[test]
    fn rejects_bad_sum() {
        assert!(matches!(
            WeightVector::new(vec![0.5, 0.6]),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn shulman_bound_check() {
        let w = WeightVector::new(vec![0.632, 0.368]).unwrap();
        assert!(w.satisfies_shulman_bound(1e-6));
        let w = WeightVector::new(vec![0.7, 0.3]).unwrap();
        assert!(!w.satisfies_shulman_bound(1e-6));
    }

    #[test]
    fn delta_is_point_mass() {
        let w = WeightVector::delta(3, 1).unwrap();
        assert_eq!(w.weights(), &[0.0, 1.0, 0.0]);
    }
}
