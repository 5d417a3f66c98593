//! Finite probability distributions, Kullback-Leibler divergence,
//! information gain, and mixtures.
//!
//! Two representations are supported: [`FiniteDistribution`], a probability
//! vector over a finite sample space, and [`BernoulliProduct`], a joint
//! distribution of independent Bernoulli events stored through its
//! per-event null probabilities.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::weights::WeightVector;

/// Inputs whose entries sum to within this of one are renormalized;
/// anything worse is rejected.
pub const INPUT_SUM_TOL: f64 = 1e-9;

/// Post-construction normalization guarantee.
pub const SUM_TOL: f64 = 1e-12;

fn check_prob(value: f64, context: &'static str) -> Result<f64> {
    // Tolerate sign dust from upstream float work, nothing bigger.
    if !value.is_finite() || value < -1e-12 || value > 1.0 + 1e-12 {
        return Err(Error::InvalidProbability { value, context });
    }
    Ok(value.clamp(0.0, 1.0))
}

/// A probability vector over the sample space `{0, .., len-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDistribution {
    probs: Vec<f64>,
}

impl FiniteDistribution {
    /// Validates entries, renormalizes round-off-level deviations from unit
    /// sum, and rejects anything worse.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::TooFewOutcomes { len: probs.len() });
        }
        let mut probs = probs;
        for p in probs.iter_mut() {
            *p = check_prob(*p, "FiniteDistribution")?;
        }
        let sum: f64 = probs.iter().sum();
        if math::abs(sum - 1.0) > INPUT_SUM_TOL {
            return Err(Error::NotNormalized { sum });
        }
        for p in probs.iter_mut() {
            *p /= sum;
        }
        Ok(Self { probs })
    }

    /// Two-outcome distribution assigning `p0` to outcome 0.
    pub fn bernoulli(p0: f64) -> Result<Self> {
        let p0 = check_prob(p0, "bernoulli")?;
        Ok(Self {
            probs: alloc::vec![p0, 1.0 - p0],
        })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The tuple representing the distribution: one probability per outcome.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, outcome: usize) -> f64 {
        self.probs[outcome]
    }

    /// Entrywise agreement within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.len() == other.len()
            && self
                .probs
                .iter()
                .zip(&other.probs)
                .all(|(a, b)| math::abs(a - b) <= tol)
    }
}

/// A joint distribution of independent Bernoulli events; entry `j` is the
/// probability that event `j` takes its null value 0.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliProduct {
    null_probs: Vec<f64>,
}

impl BernoulliProduct {
    pub fn new(null_probs: Vec<f64>) -> Result<Self> {
        if null_probs.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let mut null_probs = null_probs;
        for p in null_probs.iter_mut() {
            *p = check_prob(*p, "BernoulliProduct")?;
        }
        Ok(Self { null_probs })
    }

    pub fn len(&self) -> usize {
        self.null_probs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn null_probs(&self) -> &[f64] {
        &self.null_probs
    }

    /// Expands the product into the full joint distribution over `2^N`
    /// outcomes. Outcome index bit `j` (least significant first) carries the
    /// value of event `j`; bit 0 means the null value.
    ///
    /// Capped at N = 20 to bound memory.
    pub fn to_joint(&self) -> Result<FiniteDistribution> {
        let n = self.null_probs.len();
        if n > 20 {
            return Err(Error::ExpansionTooLarge { len: n, max: 20 });
        }
        let size = 1usize << n;
        let mut probs = Vec::with_capacity(size);
        for outcome in 0..size {
            let mut p = 1.0;
            for (j, &pj) in self.null_probs.iter().enumerate() {
                p *= if outcome >> j & 1 == 0 { pj } else { 1.0 - pj };
            }
            probs.push(p);
        }
        // Products of exact probabilities; renormalization inside `new`
        // absorbs the round-off.
        FiniteDistribution::new(probs)
    }
}

/// A nonnegative divergence in nats, possibly infinite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DivergenceValue {
    nats: f64,
}

impl DivergenceValue {
    pub(crate) fn from_nats(nats: f64) -> Self {
        debug_assert!(nats >= 0.0 || nats.is_infinite());
        Self { nats }
    }

    pub fn nats(&self) -> f64 {
        self.nats
    }

    pub fn is_infinite(&self) -> bool {
        self.nats.is_infinite()
    }
}

/// One term of `sum p * ln(p/q)` with the `0 ln 0 = 0` and
/// `0 ln(0/0) = 0` conventions; `+inf` when `q = 0 < p`.
#[inline]
pub(crate) fn kl_term(p: f64, q: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else if q <= 0.0 {
        f64::INFINITY
    } else {
        p * math::ln(p / q)
    }
}

/// KL divergence between two Bernoulli laws given their success-0
/// probabilities.
#[inline]
pub(crate) fn bernoulli_kl(p0: f64, q0: f64) -> f64 {
    kl_term(p0, q0) + kl_term(1.0 - p0, 1.0 - q0)
}

/// Information divergence `D(p || q)` in nats.
pub fn kl_divergence(p: &FiniteDistribution, q: &FiniteDistribution) -> Result<DivergenceValue> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    let mut total = 0.0;
    for (&pi, &qi) in p.probs.iter().zip(&q.probs) {
        total += kl_term(pi, qi);
        if total.is_infinite() {
            return Ok(DivergenceValue::from_nats(f64::INFINITY));
        }
    }
    // Accumulated round-off can leave a tiny negative total for equal inputs.
    Ok(DivergenceValue::from_nats(total.max(0.0)))
}

/// Divergence between two independent products: the sum of the per-event
/// Bernoulli divergences, which equals the divergence of the expanded
/// joints by the chain rule.
pub fn kl_divergence_product(
    p: &BernoulliProduct,
    q: &BernoulliProduct,
) -> Result<DivergenceValue> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    let mut total = 0.0;
    for (&pj, &qj) in p.null_probs.iter().zip(&q.null_probs) {
        total += bernoulli_kl(pj, qj);
        if total.is_infinite() {
            return Ok(DivergenceValue::from_nats(f64::INFINITY));
        }
    }
    Ok(DivergenceValue::from_nats(total.max(0.0)))
}

/// How much divergence is saved by estimating with `q` instead of `p_ref`
/// when the truth is `p_true`: `D(p_true || p_ref) - D(p_true || q)`.
pub fn information_gain(
    p_true: &FiniteDistribution,
    p_ref: &FiniteDistribution,
    q: &FiniteDistribution,
) -> Result<f64> {
    let base = kl_divergence(p_true, p_ref)?;
    let new = kl_divergence(p_true, q)?;
    if base.is_infinite() || new.is_infinite() {
        return Err(Error::InfiniteDivergence);
    }
    Ok(base.nats() - new.nats())
}

/// Componentwise convex combination of a family of distributions.
pub fn mixture(family: &[FiniteDistribution], w: &WeightVector) -> Result<FiniteDistribution> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if family.len() != w.len() {
        return Err(Error::DimensionMismatch {
            left: family.len(),
            right: w.len(),
        });
    }
    let dim = family[0].len();
    for d in family.iter().skip(1) {
        if d.len() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: d.len(),
            });
        }
    }
    let mut probs = alloc::vec![0.0; dim];
    for (d, &wi) in family.iter().zip(w.weights()) {
        for (acc, &p) in probs.iter_mut().zip(d.probs()) {
            *acc += wi * p;
        }
    }
    FiniteDistribution::new(probs)
}

/// Mixture of independent products; marginals mix linearly.
pub fn mixture_product(family: &[BernoulliProduct], w: &WeightVector) -> Result<BernoulliProduct> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if family.len() != w.len() {
        return Err(Error::DimensionMismatch {
            left: family.len(),
            right: w.len(),
        });
    }
    let dim = family[0].len();
    for d in family.iter().skip(1) {
        if d.len() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: d.len(),
            });
        }
    }
    let mut null_probs = alloc::vec![0.0; dim];
    for (d, &wi) in family.iter().zip(w.weights()) {
        for (acc, &p) in null_probs.iter_mut().zip(d.null_probs()) {
            *acc += wi * p;
        }
    }
    BernoulliProduct::new(null_probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn bern(p: f64) -> FiniteDistribution {
        FiniteDistribution::bernoulli(p).unwrap()
    }

    #[test]
    fn divergence_of_identical_is_zero() {
        let d = kl_divergence(&bern(0.3), &bern(0.3)).unwrap();
        assert_eq!(d.nats(), 0.0);
    }

    #[test]
    fn divergence_half_vs_quarter() {
        // 0.5 ln 2 + 0.5 ln(2/3)
        let d = kl_divergence(&bern(0.5), &bern(0.25)).unwrap();
        assert!((d.nats() - 0.14384103622589045).abs() < 1e-15);
    }

    #[test]
    fn divergence_against_zero_mass_is_infinite() {
        let d = kl_divergence(&bern(0.5), &bern(0.0)).unwrap();
        assert!(d.is_infinite());
    }

    #[test]
    fn divergence_zero_numerator_is_finite() {
        let d = kl_divergence(&bern(0.0), &bern(0.5)).unwrap();
        assert!((d.nats() - core::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn product_divergence_identity() {
        let p = BernoulliProduct::new(vec![0.2, 0.9]).unwrap();
        assert_eq!(kl_divergence_product(&p, &p).unwrap().nats(), 0.0);
    }

    #[test]
    fn product_divergence_sums_marginals() {
        let p = BernoulliProduct::new(vec![0.5, 0.5]).unwrap();
        let q = BernoulliProduct::new(vec![0.25, 0.25]).unwrap();
        let d = kl_divergence_product(&p, &q).unwrap();
        assert!((d.nats() - 2.0 * 0.14384103622589045).abs() < 1e-14);
    }

    #[test]
    fn product_divergence_matches_expanded_joint() {
        let p = BernoulliProduct::new(vec![0.3, 0.71, 0.05]).unwrap();
        let q = BernoulliProduct::new(vec![0.6, 0.2, 0.4]).unwrap();
        let via_product = kl_divergence_product(&p, &q).unwrap().nats();
        let via_joint = kl_divergence(&p.to_joint().unwrap(), &q.to_joint().unwrap())
            .unwrap()
            .nats();
        assert!((via_product - via_joint).abs() < 1e-10);
    }

    #[test]
    fn joint_expansion_is_capped() {
        let p = BernoulliProduct::new(vec![0.5; 21]).unwrap();
        assert!(matches!(
            p.to_joint(),
            Err(Error::ExpansionTooLarge { len: 21, max: 20 })
        ));
    }

    #[test]
    fn gain_of_reference_is_zero() {
        let g = information_gain(&bern(0.5), &bern(0.3), &bern(0.3)).unwrap();
        assert_eq!(g, 0.0);
    }

    #[test]
    fn gain_of_truth_is_full_divergence() {
        let g = information_gain(&bern(0.5), &bern(0.25), &bern(0.5)).unwrap();
        assert!((g - 0.14384103622589045).abs() < 1e-15);
    }

    #[test]
    fn gain_example_value() {
        // D(0.5||0.25) - D(0.5||0.4) evaluated termwise:
        // 0.14384103622589045 - 0.020410997260127566
        let g = information_gain(&bern(0.5), &bern(0.25), &bern(0.4)).unwrap();
        assert!((g - 0.12343003896576288).abs() < 1e-14);
    }

    #[test]
    fn gain_rejects_infinite_inputs() {
        assert!(matches!(
            information_gain(&bern(0.5), &bern(0.0), &bern(0.4)),
            Err(Error::InfiniteDivergence)
        ));
    }

    #[test]
    fn mixture_singleton_is_identity() {
        let w = WeightVector::new(vec![1.0]).unwrap();
        let m = mixture(core::slice::from_ref(&bern(0.37)), &w).unwrap();
        assert!(m.approx_eq(&bern(0.37), 1e-15));
    }

    #[test]
    fn mixture_symmetric_pair() {
        let w = WeightVector::new(vec![0.5, 0.5]).unwrap();
        let m = mixture(&[bern(0.1), bern(0.9)], &w).unwrap();
        assert!(m.approx_eq(&bern(0.5), 1e-15));
    }

    #[test]
    fn mixture_weighted_pair() {
        let w = WeightVector::new(vec![0.43, 0.57]).unwrap();
        let m = mixture(&[bern(0.2), bern(0.8)], &w).unwrap();
        assert!(m.approx_eq(&bern(0.542), 1e-12));
    }

    #[test]
    fn mixture_length_mismatch() {
        let w = WeightVector::new(vec![0.5, 0.5]).unwrap();
        assert!(mixture(&[bern(0.1)], &w).is_err());
    }

    #[test]
    fn renormalizes_small_drift_rejects_large() {
        let d = FiniteDistribution::new(vec![0.5 + 4e-10, 0.5]).unwrap();
        let sum: f64 = d.probs().iter().sum();
        assert!((sum - 1.0).abs() <= SUM_TOL);
        assert!(matches!(
            FiniteDistribution::new(vec![0.5, 0.6]),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn rejects_single_outcome() {
        assert!(matches!(
            FiniteDistribution::new(vec![1.0]),
            Err(Error::TooFewOutcomes { len: 1 })
        ));
    }

    #[test]
    fn rejects_out_of_range_entries() {
        assert!(FiniteDistribution::new(vec![-0.1, 1.1]).is_err());
        assert!(BernoulliProduct::new(vec![0.5, 1.2]).is_err());
    }
}
