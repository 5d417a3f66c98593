//! Hedged combination of conflicting LFDR estimators under a per-gene
//! plausibility floor.

use alloc::vec::Vec;

use crate::centroid::SolverConfig;
use crate::combine::{combine_independent, CombinationResult, PlausibleBox};
use crate::dist::BernoulliProduct;
use crate::ebayes::{LfdrMethod, LfdrVector};
use crate::error::{Error, Result};

/// Estimates at or below the bound by no more than this survive; only a
/// genuine shortfall excludes a method.
pub const EXCLUSION_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct CombinedLfdr {
    /// Indices of input estimators that violated the bound somewhere and
    /// were therefore excluded whole.
    pub excluded: Vec<usize>,
    /// Per-gene combined LFDR.
    pub combined: LfdrVector,
    /// The underlying combination over the surviving estimators.
    pub result: CombinationResult<BernoulliProduct>,
}

/// Combines whole LFDR vectors: an estimator violating the lower bound at
/// any gene is dropped entirely, and the survivors are mixed under one
/// global weight vector from the capacity iteration. The upper bound is
/// trivially one everywhere.
pub fn combine_lfdr(
    estimates: &[LfdrVector],
    bound: &LfdrVector,
    config: &SolverConfig,
) -> Result<CombinedLfdr> {
    if estimates.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let genes = bound.len();
    for e in estimates {
        if e.len() != genes {
            return Err(Error::DimensionMismatch {
                left: e.len(),
                right: genes,
            });
        }
    }

    let lower: Vec<f64> = bound
        .values
        .iter()
        .map(|&b| (b - EXCLUSION_TOL).max(0.0))
        .collect();
    let upper = alloc::vec![1.0; genes];
    let bounds = PlausibleBox::new(lower, upper)?;

    let members: Vec<BernoulliProduct> = estimates
        .iter()
        .map(|e| BernoulliProduct::new(e.values.clone()))
        .collect::<Result<_>>()?;

    let result = combine_independent(&members, &bounds, config)?;
    let excluded: Vec<usize> = (0..estimates.len())
        .filter(|i| !result.surviving.contains(i))
        .collect();
    let combined = LfdrVector::new(
        result.combined.null_probs().to_vec(),
        LfdrMethod::Combined,
    )?;

    Ok(CombinedLfdr {
        excluded,
        combined,
        result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn lfdr(values: Vec<f64>, method: LfdrMethod) -> LfdrVector {
        LfdrVector::new(values, method).unwrap()
    }

    #[test]
    fn violating_method_is_wholly_excluded() {
        let bound = lfdr(vec![0.2, 0.1, 0.0], LfdrMethod::LowerBound);
        let good = lfdr(vec![0.5, 0.4, 0.3], LfdrMethod::TheoreticalNull);
        // violates only at gene 1, still dropped everywhere
        let bad = lfdr(vec![0.9, 0.05, 0.8], LfdrMethod::QValue);
        let r = combine_lfdr(&[good.clone(), bad], &bound, &SolverConfig::default()).unwrap();
        assert_eq!(r.excluded, vec![1]);
        assert_eq!(r.result.surviving, vec![0]);
        assert_eq!(r.combined.values, good.values);
    }

    #[test]
    fn equality_with_bound_survives() {
        let bound = lfdr(vec![0.2, 0.1], LfdrMethod::LowerBound);
        let at_bound = lfdr(vec![0.2, 0.1], LfdrMethod::TheoreticalNull);
        let r = combine_lfdr(
            &[at_bound],
            &bound,
            &SolverConfig::default(),
        )
        .unwrap();
        assert!(r.excluded.is_empty());
    }

    #[test]
    fn two_survivors_get_hedged_weights() {
        let bound = lfdr(vec![0.0, 0.0, 0.0], LfdrMethod::LowerBound);
        let a = lfdr(vec![0.2, 0.5, 0.7], LfdrMethod::TheoreticalNull);
        let b = lfdr(vec![0.4, 0.3, 0.9], LfdrMethod::EmpiricalNull);
        let r = combine_lfdr(&[a.clone(), b.clone()], &bound, &SolverConfig::default()).unwrap();
        assert!(r.excluded.is_empty());
        let w = r.result.weights.weights();
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        for &wi in w {
            assert!(wi >= 1.0 - crate::MAX_INDUCED_WEIGHT - 1e-6);
            assert!(wi <= crate::MAX_INDUCED_WEIGHT + 1e-6);
        }
        // combined values are the per-gene mixture
        for g in 0..3 {
            let mix = w[0] * a.values[g] + w[1] * b.values[g];
            assert!((r.combined.values[g] - mix).abs() < 1e-10);
            let lo = a.values[g].min(b.values[g]);
            let hi = a.values[g].max(b.values[g]);
            assert!(r.combined.values[g] >= lo - 1e-12);
            assert!(r.combined.values[g] <= hi + 1e-12);
        }
    }

    #[test]
    fn all_excluded_errors() {
        let bound = lfdr(vec![0.5], LfdrMethod::LowerBound);
        let a = lfdr(vec![0.1], LfdrMethod::QValue);
        assert!(matches!(
            combine_lfdr(&[a], &bound, &SolverConfig::default()),
            Err(Error::NoPlausibleMember { .. })
        ));
    }
}
