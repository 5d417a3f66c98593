//! Hedged combination of combining distributions under plausibility
//! constraints.
//!
//! The combination keeps the combining distributions consistent with the
//! per-event probability bounds, reduces them to their extreme subset,
//! and mixes the extremes under the induced weighting. The result is the
//! distribution minimizing the worst-case divergence from whatever
//! plausible combining distribution is true.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::centroid::{induced_weighting, CentroidResult, MixtureFamily, SolverConfig};
use crate::dist::FiniteDistribution;
use crate::error::{BoxViolation, Error, Result};
use crate::extreme::{extreme_subset, PointSet};
use crate::weights::WeightVector;

/// A closed subinterval of [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !lower.is_finite() || !upper.is_finite() || lower < 0.0 || upper > 1.0 || lower > upper {
            return Err(Error::InvalidParameter {
                context: "interval bounds must satisfy 0 <= lower <= upper <= 1",
            });
        }
        Ok(Self { lower, upper })
    }

    pub fn full() -> Self {
        Self {
            lower: 0.0,
            upper: 1.0,
        }
    }

    pub fn contains(&self, p: f64) -> bool {
        p >= self.lower && p <= self.upper
    }
}

/// Per-event lower and upper probability bounds defining the plausible
/// set. Bounds are closed on both sides.
#[derive(Debug, Clone, PartialEq)]
pub struct PlausibleBox {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl PlausibleBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                left: lower.len(),
                right: upper.len(),
            });
        }
        for (&lo, &hi) in lower.iter().zip(&upper) {
            if !lo.is_finite() || !hi.is_finite() || lo < 0.0 || hi > 1.0 || lo > hi {
                return Err(Error::InvalidParameter {
                    context: "box bounds must satisfy 0 <= lower <= upper <= 1 per event",
                });
            }
        }
        Ok(Self { lower, upper })
    }

    /// The unconstrained box `[0, 1]^len`.
    pub fn full(len: usize) -> Result<Self> {
        Self::new(alloc::vec![0.0; len], alloc::vec![1.0; len])
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, coords: &[f64]) -> bool {
        coords.len() == self.len()
            && coords
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&p, (&lo, &hi))| p >= lo && p <= hi)
    }

    fn violations(&self, member: usize, coords: &[f64]) -> Vec<BoxViolation> {
        coords
            .iter()
            .enumerate()
            .zip(self.lower.iter().zip(&self.upper))
            .filter(|((_, &p), (&lo, &hi))| p < lo || p > hi)
            .map(|((event, &value), (&lower, &upper))| BoxViolation {
                member,
                event,
                value,
                lower,
                upper,
            })
            .collect()
    }
}

/// Outcome of a combination: which members survived the plausibility
/// filter, which of those were extreme, and the hedged mixture over the
/// extremes.
#[derive(Debug, Clone)]
pub struct CombinationResult<D> {
    /// Indices of combining distributions inside the plausible box.
    pub surviving: Vec<usize>,
    /// Indices (into the input) of the extreme surviving members.
    pub extreme: Vec<usize>,
    /// Weights over `extreme`, in that order.
    pub weights: WeightVector,
    /// The combined distribution.
    pub combined: D,
    /// Attained worst-case divergence in nats.
    pub value: f64,
    pub iterations: usize,
    pub gap: f64,
}

fn combine_generic<D>(
    combining: &[D],
    bounds: &PlausibleBox,
    config: &SolverConfig,
    to_points: impl Fn(&[D]) -> Result<PointSet>,
) -> Result<CombinationResult<D>>
where
    D: MixtureFamily,
{
    if combining.is_empty() {
        return Err(Error::EmptyFamily);
    }
    for d in combining {
        if d.coords().len() != bounds.len() {
            return Err(Error::DimensionMismatch {
                left: d.coords().len(),
                right: bounds.len(),
            });
        }
    }

    let surviving: Vec<usize> = (0..combining.len())
        .filter(|&i| bounds.contains(combining[i].coords()))
        .collect();
    if surviving.is_empty() {
        let mut violations = Vec::new();
        for (i, d) in combining.iter().enumerate() {
            violations.extend(bounds.violations(i, d.coords()));
        }
        return Err(Error::NoPlausibleMember { violations });
    }

    let survivors: Vec<D> = surviving.iter().map(|&i| combining[i].clone()).collect();
    let points = to_points(&survivors)?;
    let ext = extreme_subset(&points);
    let extreme: Vec<usize> = ext.extreme.iter().map(|&k| surviving[k]).collect();
    let extreme_members: Vec<D> = ext.extreme.iter().map(|&k| survivors[k].clone()).collect();

    let solved = induced_weighting(&extreme_members, config)?;
    let CentroidResult {
        centroid,
        weights,
        value,
        iterations,
        gap,
    } = solved;

    Ok(CombinationResult {
        surviving,
        extreme,
        weights,
        combined: centroid,
        value,
        iterations,
        gap,
    })
}

/// Combines finite distributions constrained by per-outcome probability
/// bounds. The box length must equal the sample-space size.
pub fn combine(
    combining: &[FiniteDistribution],
    bounds: &PlausibleBox,
    config: &SolverConfig,
) -> Result<CombinationResult<FiniteDistribution>> {
    combine_generic(combining, bounds, config, PointSet::from_distributions)
}

/// Combines independent-product distributions constrained by per-event
/// bounds on the null probabilities.
pub fn combine_independent(
    combining: &[crate::dist::BernoulliProduct],
    bounds: &PlausibleBox,
    config: &SolverConfig,
) -> Result<CombinationResult<crate::dist::BernoulliProduct>> {
    combine_generic(combining, bounds, config, PointSet::from_products)
}

/// Combination of event probabilities: the optimal mixture of the lowest
/// and highest plausible values.
#[derive(Debug, Clone, Copy)]
pub struct BinaryCombination {
    /// Lowest plausible probability.
    pub lo: f64,
    /// Highest plausible probability.
    pub hi: f64,
    /// Weight on `lo`; the complement goes to `hi`.
    pub weight_low: f64,
    /// The combined probability `weight_low * lo + (1 - weight_low) * hi`.
    pub p_plus: f64,
    /// Attained worst-case divergence in nats.
    pub value: f64,
}

/// Combines probabilities of a single event. Values outside `plausible`
/// are dropped; the rest reduce to their extremes, whose optimal weights
/// come from the two-member capacity iteration.
///
/// When only one distinct plausible value remains, the convention is
/// weight one on it.
pub fn combine_binary(
    probs: &[f64],
    plausible: &Interval,
    config: &SolverConfig,
) -> Result<BinaryCombination> {
    if probs.is_empty() {
        return Err(Error::EmptyFamily);
    }
    for &p in probs {
        if !p.is_finite() || !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability {
                value: p,
                context: "combine_binary",
            });
        }
    }
    let kept: Vec<f64> = probs.iter().copied().filter(|&p| plausible.contains(p)).collect();
    if kept.is_empty() {
        let violations = probs
            .iter()
            .enumerate()
            .map(|(member, &value)| BoxViolation {
                member,
                event: 0,
                value,
                lower: plausible.lower,
                upper: plausible.upper,
            })
            .collect();
        return Err(Error::NoPlausibleMember { violations });
    }
    let lo = kept.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = kept.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        return Ok(BinaryCombination {
            lo,
            hi,
            weight_low: 1.0,
            p_plus: lo,
            value: 0.0,
        });
    }
    let pair = [
        FiniteDistribution::bernoulli(lo)?,
        FiniteDistribution::bernoulli(hi)?,
    ];
    let solved = induced_weighting(&pair, config)?;
    let weight_low = solved.weights.get(0);
    Ok(BinaryCombination {
        lo,
        hi,
        weight_low,
        p_plus: weight_low * lo + (1.0 - weight_low) * hi,
        value: solved.value,
    })
}

/// A game payoff: two or three components compared lexicographically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Utility {
    Pair([f64; 2]),
    Triple([f64; 3]),
}

impl Utility {
    fn components(&self) -> &[f64] {
        match self {
            Utility::Pair(c) => c,
            Utility::Triple(c) => c,
        }
    }
}

/// Strict lexicographic comparison: earlier components dominate, later
/// components only break ties.
pub fn lex_compare(u: &Utility, v: &Utility) -> Result<Ordering> {
    let a = u.components();
    let b = v.components();
    if a.len() != b.len() {
        return Err(Error::ArityMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(Ordering::Equal) => continue,
            Some(ord) => return Ok(ord),
            None => return Err(Error::NotComparable),
        }
    }
    Ok(Ordering::Equal)
}

/// A loss table indexed by outcome (row) and action (column).
#[derive(Debug, Clone)]
pub struct LossMatrix {
    rows: Vec<Vec<f64>>,
}

impl LossMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidParameter {
                context: "loss matrix needs at least one outcome row",
            });
        }
        let actions = rows[0].len();
        if actions == 0 {
            return Err(Error::EmptyActionSet);
        }
        for row in &rows {
            if row.len() != actions {
                return Err(Error::DimensionMismatch {
                    left: actions,
                    right: row.len(),
                });
            }
            for &loss in row {
                if !loss.is_finite() {
                    return Err(Error::InvalidParameter {
                        context: "loss values must be finite",
                    });
                }
            }
        }
        Ok(Self { rows })
    }

    pub fn outcomes(&self) -> usize {
        self.rows.len()
    }

    pub fn actions(&self) -> usize {
        self.rows[0].len()
    }
}

/// Expected loss of every action under a distribution.
pub fn expected_losses(dist: &FiniteDistribution, loss: &LossMatrix) -> Result<Vec<f64>> {
    if loss.outcomes() != dist.len() {
        return Err(Error::DimensionMismatch {
            left: loss.outcomes(),
            right: dist.len(),
        });
    }
    let mut expected = alloc::vec![0.0; loss.actions()];
    for (outcome, row) in loss.rows.iter().enumerate() {
        let p = dist.prob(outcome);
        for (acc, &l) in expected.iter_mut().zip(row) {
            *acc += p * l;
        }
    }
    Ok(expected)
}

/// The action minimizing expected loss under the combined distribution.
/// Ties go to the lowest action index.
pub fn optimal_action(
    result: &CombinationResult<FiniteDistribution>,
    loss: &LossMatrix,
) -> Result<usize> {
    let expected = expected_losses(&result.combined, loss)?;
    let mut best = 0;
    for (a, &e) in expected.iter().enumerate().skip(1) {
        if e < expected[best] {
            best = a;
        }
    }
    Ok(best)
}

/// Event-probability range of a combination: every combined marginal lies
/// between the surviving members' minimum and maximum for that event.
pub fn mixture_in_range<D: MixtureFamily>(result: &CombinationResult<D>, combining: &[D]) -> bool {
    let dim = result.combined.coords().len();
    for j in 0..dim {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &i in &result.surviving {
            let p = combining[i].coords()[j];
            lo = lo.min(p);
            hi = hi.max(p);
        }
        let c = result.combined.coords()[j];
        if c < lo - 1e-12 || c > hi + 1e-12 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::BernoulliProduct;
    use crate::math;
    use alloc::vec;

    fn bern(p: f64) -> FiniteDistribution {
        FiniteDistribution::bernoulli(p).unwrap()
    }

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn single_plausible_member_is_returned_unchanged() {
        let bounds = PlausibleBox::new(vec![0.1, 0.0], vec![0.5, 1.0]).unwrap();
        let r = combine(&[bern(0.3)], &bounds, &cfg()).unwrap();
        assert_eq!(r.surviving, vec![0]);
        assert_eq!(r.extreme, vec![0]);
        assert!(r.combined.approx_eq(&bern(0.3), 0.0));
        assert_eq!(r.weights.weights(), &[1.0]);
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn symmetric_triple_drops_interior_member() {
        let bounds = PlausibleBox::full(2).unwrap();
        let r = combine(&[bern(0.2), bern(0.5), bern(0.8)], &bounds, &cfg()).unwrap();
        assert_eq!(r.surviving, vec![0, 1, 2]);
        assert_eq!(r.extreme, vec![0, 2]);
        assert!((r.weights.get(0) - 0.5).abs() < 1e-6);
        assert!(r.combined.approx_eq(&bern(0.5), 1e-6));
    }

    #[test]
    fn filter_keeps_single_survivor() {
        let bounds = PlausibleBox::new(vec![0.05, 0.0], vec![1.0, 1.0]).unwrap();
        let r = combine(&[bern(0.01), bern(0.2)], &bounds, &cfg()).unwrap();
        assert_eq!(r.surviving, vec![1]);
        assert!(r.combined.approx_eq(&bern(0.2), 0.0));
    }

    #[test]
    fn empty_intersection_reports_violations() {
        let bounds = PlausibleBox::new(vec![0.4, 0.0], vec![0.6, 1.0]).unwrap();
        match combine(&[bern(0.1), bern(0.9)], &bounds, &cfg()) {
            Err(Error::NoPlausibleMember { violations }) => {
                assert_eq!(violations.len(), 2);
                assert_eq!(violations[0].member, 0);
                assert_eq!(violations[1].member, 1);
            }
            other => panic!("expected empty intersection, got {other:?}"),
        }
    }

    #[test]
    fn binary_symmetric_pair() {
        let r = combine_binary(&[0.3, 0.7], &Interval::full(), &cfg()).unwrap();
        assert!((r.weight_low - 0.5).abs() < 1e-6);
        assert!((r.p_plus - 0.5).abs() < 1e-6);
    }

    #[test]
    fn binary_degenerate_pair() {
        let r = combine_binary(&[0.4, 0.4], &Interval::full(), &cfg()).unwrap();
        assert_eq!(r.weight_low, 1.0);
        assert_eq!(r.p_plus, 0.4);
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn binary_no_plausible_member_errors() {
        let plausible = Interval::new(0.5, 1.0).unwrap();
        assert!(matches!(
            combine_binary(&[0.1, 0.2], &plausible, &cfg()),
            Err(Error::NoPlausibleMember { .. })
        ));
    }

    // Frozen from the 1e-6-step grid maximization of the two-member
    // objective (tests/support/mod.rs).
    #[test]
    fn binary_regression_pair() {
        let r = combine_binary(&[0.001, 0.2], &Interval::full(), &cfg()).unwrap();
        assert!((r.weight_low - 0.614873).abs() < 5e-5, "w {}", r.weight_low);
        assert!((r.p_plus - 0.077640273).abs() < 1e-5, "p {}", r.p_plus);
        assert!((r.value - 0.075387484747).abs() < 1e-9, "value {}", r.value);
    }

    #[test]
    fn independent_n1_matches_binary() {
        let products = [
            BernoulliProduct::new(vec![0.12]).unwrap(),
            BernoulliProduct::new(vec![0.57]).unwrap(),
            BernoulliProduct::new(vec![0.3]).unwrap(),
        ];
        let bounds = PlausibleBox::full(1).unwrap();
        let joint = combine_independent(&products, &bounds, &cfg()).unwrap();
        let binary = combine_binary(&[0.12, 0.57, 0.3], &Interval::full(), &cfg()).unwrap();
        assert!((joint.combined.null_probs()[0] - binary.p_plus).abs() < 1e-10);
        assert!((joint.value - binary.value).abs() < 1e-10);
    }

    #[test]
    fn independent_symmetric_swap() {
        let products = [
            BernoulliProduct::new(vec![0.1, 0.8]).unwrap(),
            BernoulliProduct::new(vec![0.9, 0.2]).unwrap(),
        ];
        let bounds = PlausibleBox::full(2).unwrap();
        let r = combine_independent(&products, &bounds, &cfg()).unwrap();
        assert!((r.weights.get(0) - 0.5).abs() < 1e-6);
        assert!((r.weights.get(1) - 0.5).abs() < 1e-6);
    }

    #[test]
    fn lex_compare_cases() {
        let less = lex_compare(
            &Utility::Pair([1.0, 9.0]),
            &Utility::Pair([2.0, 0.0]),
        )
        .unwrap();
        assert_eq!(less, Ordering::Less);
        assert_eq!(
            lex_compare(&Utility::Pair([1.0, 2.0]), &Utility::Pair([1.0, 3.0])).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            lex_compare(
                &Utility::Triple([1.0, 2.0, 5.0]),
                &Utility::Triple([1.0, 2.0, 5.0])
            )
            .unwrap(),
            Ordering::Equal
        );
        assert!(matches!(
            lex_compare(&Utility::Pair([1.0, 2.0]), &Utility::Triple([1.0, 2.0, 3.0])),
            Err(Error::ArityMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn zero_one_loss_picks_the_mode() {
        let bounds = PlausibleBox::full(2).unwrap();
        let r = combine(&[bern(0.7)], &bounds, &cfg()).unwrap();
        let loss = LossMatrix::new(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(optimal_action(&r, &loss).unwrap(), 0);
    }

    #[test]
    fn constant_loss_breaks_ties_low() {
        let bounds = PlausibleBox::full(2).unwrap();
        let r = combine(&[bern(0.5)], &bounds, &cfg()).unwrap();
        let loss = LossMatrix::new(vec![vec![2.0, 2.0, 2.0], vec![2.0, 2.0, 2.0]]).unwrap();
        assert_eq!(optimal_action(&r, &loss).unwrap(), 0);
    }

    #[test]
    fn asymmetric_loss_example() {
        // expected losses at P(0) = 0.25: reject 1.0, accept 0.75
        let bounds = PlausibleBox::full(2).unwrap();
        let r = combine(&[bern(0.25)], &bounds, &cfg()).unwrap();
        let loss = LossMatrix::new(vec![vec![4.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let expected = expected_losses(&r.combined, &loss).unwrap();
        assert!((expected[0] - 1.0).abs() < 1e-12);
        assert!((expected[1] - 0.75).abs() < 1e-12);
        assert_eq!(optimal_action(&r, &loss).unwrap(), 1);
    }

    #[test]
    fn enlarging_the_box_never_shrinks_survivors() {
        let members = [bern(0.15), bern(0.4), bern(0.85)];
        let tight = PlausibleBox::new(vec![0.3, 0.0], vec![0.5, 1.0]).unwrap();
        let loose = PlausibleBox::new(vec![0.1, 0.0], vec![0.9, 1.0]).unwrap();
        let small = combine(&members, &tight, &cfg()).unwrap();
        let large = combine(&members, &loose, &cfg()).unwrap();
        for i in &small.surviving {
            assert!(large.surviving.contains(i));
        }
    }

    #[test]
    fn combined_marginals_stay_in_member_range() {
        let products = [
            BernoulliProduct::new(vec![0.2, 0.6, 0.3]).unwrap(),
            BernoulliProduct::new(vec![0.5, 0.1, 0.9]).unwrap(),
            BernoulliProduct::new(vec![0.8, 0.4, 0.5]).unwrap(),
        ];
        let bounds = PlausibleBox::full(3).unwrap();
        let r = combine_independent(&products, &bounds, &cfg()).unwrap();
        assert!(mixture_in_range(&r, &products));
    }

    #[test]
    fn shulman_bound_on_extreme_weights() {
        let bounds = PlausibleBox::full(2).unwrap();
        let r = combine(&[bern(0.05), bern(0.3), bern(0.6)], &bounds, &cfg()).unwrap();
        assert!(r.weights.satisfies_shulman_bound(1e-6));
    }

    #[test]
    fn near_midpoint_bound() {
        for (a, b) in [(0.02, 0.9), (0.001, 0.05), (0.3, 0.35)] {
            let r = combine_binary(&[a, b], &Interval::full(), &cfg()).unwrap();
            let mid = 0.5 * (r.lo + r.hi);
            let slack = (crate::MAX_INDUCED_WEIGHT - 0.5) * (r.hi - r.lo);
            assert!(math::abs(r.p_plus - mid) <= slack + 1e-12);
        }
    }
}
