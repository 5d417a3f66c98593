//! KL centroids by capacity iteration.
//!
//! The centroid of a finite family is the distribution minimizing the
//! worst-case divergence from the family. It equals the family mixture
//! under the weights maximizing the weighted divergence to that mixture,
//! so it is found by the classical alternating capacity iteration, which
//! certifies its own optimality gap at every step:
//! `max_i D(P_i || M_w) - sum_i w_i D(P_i || M_w) >= 0`, with equality
//! exactly at the optimum.

use alloc::vec::Vec;

use crate::dist::{kl_divergence, kl_divergence_product, BernoulliProduct, FiniteDistribution};
use crate::error::{Error, Result};
use crate::math;
use crate::weights::WeightVector;

/// The arithmetic a family must support for the capacity iteration:
/// mixing under weights and divergence from a mixture.
pub trait MixtureFamily: Clone {
    /// Convex combination of `family` under `weights` (same length).
    fn mix(family: &[Self], weights: &[f64]) -> Self;
    /// `D(self || mixture)` in nats; may be infinite.
    fn divergence_from(&self, mixture: &Self) -> f64;
    /// Coordinatewise equality within `tol`, used to merge duplicates.
    fn is_same(&self, other: &Self, tol: f64) -> bool;
    /// The coordinates representing the distribution as a point.
    fn coords(&self) -> &[f64];
}

impl MixtureFamily for FiniteDistribution {
    fn mix(family: &[Self], weights: &[f64]) -> Self {
        let dim = family[0].len();
        let mut probs = alloc::vec![0.0; dim];
        for (d, &w) in family.iter().zip(weights) {
            for (acc, &p) in probs.iter_mut().zip(d.probs()) {
                *acc += w * p;
            }
        }
        FiniteDistribution::new(probs).expect("mixture of valid distributions")
    }

    fn divergence_from(&self, mixture: &Self) -> f64 {
        kl_divergence(self, mixture)
            .expect("family members share a sample space")
            .nats()
    }

    fn is_same(&self, other: &Self, tol: f64) -> bool {
        self.approx_eq(other, tol)
    }

    fn coords(&self) -> &[f64] {
        self.probs()
    }
}

impl MixtureFamily for BernoulliProduct {
    fn mix(family: &[Self], weights: &[f64]) -> Self {
        let dim = family[0].len();
        let mut null_probs = alloc::vec![0.0; dim];
        for (d, &w) in family.iter().zip(weights) {
            for (acc, &p) in null_probs.iter_mut().zip(d.null_probs()) {
                *acc += w * p;
            }
        }
        BernoulliProduct::new(null_probs).expect("mixture of valid products")
    }

    fn divergence_from(&self, mixture: &Self) -> f64 {
        kl_divergence_product(self, mixture)
            .expect("family members share a length")
            .nats()
    }

    fn is_same(&self, other: &Self, tol: f64) -> bool {
        self.len() == other.len()
            && self
                .null_probs()
                .iter()
                .zip(other.null_probs())
                .all(|(a, b)| math::abs(a - b) <= tol)
    }

    fn coords(&self) -> &[f64] {
        self.null_probs()
    }
}

/// Solver tuning.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Convergence threshold on the certified gap, in nats.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 100_000,
        }
    }
}

/// Converged weighting and centroid for a family.
#[derive(Debug, Clone)]
pub struct CentroidResult<D> {
    /// The optimal mixture.
    pub centroid: D,
    /// Weights over the input family, in input order. Duplicate members
    /// are merged before solving; the merged weight is reported on the
    /// first occurrence and later duplicates get zero.
    pub weights: WeightVector,
    /// Attained worst-case divergence in nats.
    pub value: f64,
    pub iterations: usize,
    /// Certified optimality gap at the returned iterate.
    pub gap: f64,
}

/// One capacity-iteration step seen by [`induced_weighting_traced`].
#[derive(Debug, Clone, Copy)]
pub struct IterationRecord {
    /// Weighted average divergence (lower bound on the optimum).
    pub lower: f64,
    /// Maximum divergence (upper bound attained by the current mixture).
    pub upper: f64,
    /// Smallest gap certified so far.
    pub certified_gap: f64,
}

fn dedup_family<D: MixtureFamily>(family: &[D], tol: f64) -> (Vec<D>, Vec<usize>) {
    let mut unique: Vec<D> = Vec::new();
    let mut map = Vec::with_capacity(family.len());
    for member in family {
        match unique.iter().position(|u| u.is_same(member, tol)) {
            Some(idx) => map.push(idx),
            None => {
                unique.push(member.clone());
                map.push(unique.len() - 1);
            }
        }
    }
    (unique, map)
}

/// Weights maximizing the weighted divergence of each member from the
/// family mixture; the optimal mixture is the family centroid.
///
/// Termination: `max_i D(P_i||M_w) - sum_i w_i D(P_i||M_w) <= tol`, a
/// certified bound on the distance from the optimum value.
pub fn induced_weighting<D: MixtureFamily>(
    family: &[D],
    config: &SolverConfig,
) -> Result<CentroidResult<D>> {
    induced_weighting_impl(family, config, None)
}

/// Same as [`induced_weighting`], also returning the per-iteration
/// bound trace.
pub fn induced_weighting_traced<D: MixtureFamily>(
    family: &[D],
    config: &SolverConfig,
) -> Result<(CentroidResult<D>, Vec<IterationRecord>)> {
    let mut trace = Vec::new();
    let result = induced_weighting_impl(family, config, Some(&mut trace))?;
    Ok((result, trace))
}

fn induced_weighting_impl<D: MixtureFamily>(
    family: &[D],
    config: &SolverConfig,
    mut trace: Option<&mut Vec<IterationRecord>>,
) -> Result<CentroidResult<D>> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let (unique, map) = dedup_family(family, 1e-12);
    let m = unique.len();
    if m == 1 {
        return Ok(CentroidResult {
            centroid: unique[0].clone(),
            weights: expand_weights(&[1.0], &map, family.len()),
            value: 0.0,
            iterations: 0,
            gap: 0.0,
        });
    }
    if m == 2 {
        let (w, iterations) = solve_pair_weight(&unique[0], &unique[1], config, &mut trace);
        let weights = [w, 1.0 - w];
        let mix = D::mix(&unique, &weights);
        let d0 = unique[0].divergence_from(&mix);
        let d1 = unique[1].divergence_from(&mix);
        let value = w * d0 + (1.0 - w) * d1;
        let gap = (d0.max(d1) - value).max(0.0);
        if gap > config.tol {
            return Err(Error::NoConvergence { iterations, gap });
        }
        return Ok(CentroidResult {
            centroid: mix,
            weights: expand_weights(&weights, &map, family.len()),
            value,
            iterations,
            gap,
        });
    }

    // Multiplicative updates keep every weight positive, so the mixture
    // dominates each member and divergences stay finite.
    let mut log_w = alloc::vec![-math::ln(m as f64); m];
    let mut w = alloc::vec![1.0 / m as f64; m];
    let mut divergences = alloc::vec![0.0; m];
    let mut certified = f64::INFINITY;

    for iter in 1..=config.max_iter {
        let mix = D::mix(&unique, &w);
        let mut upper = f64::NEG_INFINITY;
        let mut lower = 0.0;
        for (i, member) in unique.iter().enumerate() {
            let d = member.divergence_from(&mix);
            divergences[i] = d;
            upper = upper.max(d);
            lower += w[i] * d;
        }
        let gap = (upper - lower).max(0.0);
        certified = certified.min(gap);
        if let Some(t) = trace.as_deref_mut() {
            t.push(IterationRecord {
                lower,
                upper,
                certified_gap: certified,
            });
        }
        if gap <= config.tol {
            return Ok(CentroidResult {
                centroid: mix,
                weights: expand_weights(&w, &map, family.len()),
                value: lower,
                iterations: iter,
                gap,
            });
        }

        // w_i <- w_i exp(D_i) / normalizer, in log space for safety.
        let mut max_log = f64::NEG_INFINITY;
        for i in 0..m {
            log_w[i] += divergences[i];
            max_log = max_log.max(log_w[i]);
        }
        let mut norm = 0.0;
        for i in 0..m {
            w[i] = math::exp(log_w[i] - max_log);
            norm += w[i];
        }
        let ln_norm = math::ln(norm);
        for i in 0..m {
            w[i] /= norm;
            log_w[i] -= max_log + ln_norm;
        }
    }

    Err(Error::NoConvergence {
        iterations: config.max_iter,
        gap: certified,
    })
}

/// Two distinct members are both extreme and both carry weight, so the
/// optimum is the interior point where the two divergences to the
/// mixture equalize. The difference is strictly decreasing in the first
/// weight, so bisection pins it to machine precision regardless of how
/// close the members are.
fn solve_pair_weight<D: MixtureFamily>(
    a: &D,
    b: &D,
    config: &SolverConfig,
    trace: &mut Option<&mut Vec<IterationRecord>>,
) -> (f64, usize) {
    let pair = [a.clone(), b.clone()];
    let eval = |w: f64| {
        let mix = D::mix(&pair, &[w, 1.0 - w]);
        (a.divergence_from(&mix), b.divergence_from(&mix))
    };
    let mut lo = 1e-9;
    let mut hi = 1.0 - 1e-9;
    let max_steps = config.max_iter.min(90);
    let mut certified = f64::INFINITY;
    let mut steps = 0;
    for _ in 0..max_steps {
        steps += 1;
        let w = 0.5 * (lo + hi);
        let (d0, d1) = eval(w);
        if let Some(t) = trace.as_deref_mut() {
            let lower = w * d0 + (1.0 - w) * d1;
            let upper = d0.max(d1);
            certified = certified.min(upper - lower);
            t.push(IterationRecord {
                lower,
                upper,
                certified_gap: certified,
            });
        }
        if d0 > d1 {
            lo = w;
        } else {
            hi = w;
        }
        if hi - lo < 1e-16 {
            break;
        }
    }
    (0.5 * (lo + hi), steps)
}

fn expand_weights(unique_w: &[f64], map: &[usize], len: usize) -> WeightVector {
    let mut full = alloc::vec![0.0; len];
    let mut seen = alloc::vec![false; unique_w.len()];
    for (orig, &uidx) in map.iter().enumerate() {
        if !seen[uidx] {
            full[orig] = unique_w[uidx];
            seen[uidx] = true;
        }
    }
    WeightVector::new(full).expect("solver weights are a valid simplex point")
}

/// Exhaustive simplex-grid maximization of the capacity objective, used
/// to verify the iterative solver on small families.
///
/// Families of up to four members are supported. The full simplex is
/// scanned at a coarse resolution and then zoomed around the best cell
/// until the requested `step` is reached; the objective is concave in
/// the weights, so zooming cannot lose the optimum.
pub fn grid_oracle_weighting<D: MixtureFamily>(
    family: &[D],
    step: f64,
) -> Result<CentroidResult<D>> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if family.len() > 4 {
        return Err(Error::FamilyTooLarge {
            size: family.len(),
            max: 4,
        });
    }
    if !(step > 0.0 && step < 1.0) {
        return Err(Error::InvalidParameter {
            context: "grid step must be in (0, 1)",
        });
    }
    let (unique, map) = dedup_family(family, 1e-12);
    let m = unique.len();
    if m == 1 {
        return Ok(CentroidResult {
            centroid: unique[0].clone(),
            weights: expand_weights(&[1.0], &map, family.len()),
            value: 0.0,
            iterations: 0,
            gap: 0.0,
        });
    }

    let objective = |w: &[f64]| -> f64 {
        let mix = D::mix(&unique, w);
        let mut total = 0.0;
        for (member, &wi) in unique.iter().zip(w) {
            if wi > 0.0 {
                total += wi * member.divergence_from(&mix);
            }
        }
        total
    };

    // Stage 1: full scan. Affordable exhaustively at the final step for
    // pairs; larger families start coarse and zoom.
    let coarse = if m == 2 { step } else { step.max(1e-2) };
    let mut best_w = alloc::vec![1.0 / m as f64; m];
    let mut best_val = f64::NEG_INFINITY;
    scan_full_simplex(m, coarse, &mut |w| {
        let v = objective(w);
        if v > best_val {
            best_val = v;
            best_w.copy_from_slice(w);
        }
    });

    // Zoom stages: shrink the cell tenfold around the incumbent with a
    // four-cell safety window on each side.
    let mut cell = coarse;
    while cell > step {
        let next = (cell / 10.0).max(step);
        let radius = 4.0 * cell;
        let lo: Vec<f64> = best_w.iter().map(|&w| (w - radius).max(0.0)).collect();
        let hi: Vec<f64> = best_w.iter().map(|&w| (w + radius).min(1.0)).collect();
        scan_box_simplex(&lo, &hi, next, &mut |w| {
            let v = objective(w);
            if v > best_val {
                best_val = v;
                best_w.copy_from_slice(w);
            }
        });
        cell = next;
    }

    let centroid = D::mix(&unique, &best_w);
    Ok(CentroidResult {
        centroid,
        weights: expand_weights(&best_w, &map, family.len()),
        value: best_val,
        iterations: 0,
        gap: 0.0,
    })
}

/// Visits every grid point of the (m-1)-simplex with spacing `step`.
fn scan_full_simplex(m: usize, step: f64, visit: &mut impl FnMut(&[f64])) {
    let resolution = (1.0 / step + 0.5) as usize;
    let mut w = alloc::vec![0.0; m];
    scan_rec(m, resolution, resolution, 0, &mut w, visit);
}

fn scan_rec(
    m: usize,
    resolution: usize,
    remaining: usize,
    depth: usize,
    w: &mut [f64],
    visit: &mut impl FnMut(&[f64]),
) {
    if depth == m - 1 {
        w[depth] = remaining as f64 / resolution as f64;
        visit(w);
        return;
    }
    for k in 0..=remaining {
        w[depth] = k as f64 / resolution as f64;
        scan_rec(m, resolution, remaining - k, depth + 1, w, visit);
    }
}

/// Visits grid points of spacing `step` inside `[lo, hi]` boxes whose
/// coordinates sum to one.
fn scan_box_simplex(lo: &[f64], hi: &[f64], step: f64, visit: &mut impl FnMut(&[f64])) {
    let m = lo.len();
    let mut w = alloc::vec![0.0; m];
    scan_box_rec(lo, hi, step, 0, 1.0, &mut w, visit);
}

fn scan_box_rec(
    lo: &[f64],
    hi: &[f64],
    step: f64,
    depth: usize,
    remaining: f64,
    w: &mut [f64],
    visit: &mut impl FnMut(&[f64]),
) {
    let m = lo.len();
    if depth == m - 1 {
        if remaining >= lo[depth] - 1e-12 && remaining <= hi[depth] + 1e-12 {
            w[depth] = remaining.clamp(0.0, 1.0);
            visit(w);
        }
        return;
    }
    let start = (lo[depth] / step) as usize;
    let mut k = start;
    loop {
        let x = k as f64 * step;
        if x > hi[depth] + 1e-12 || x > remaining + 1e-12 {
            break;
        }
        w[depth] = x.min(remaining);
        scan_box_rec(lo, hi, step, depth + 1, remaining - w[depth], w, visit);
        k += 1;
    }
}

/// Per-member outcome of [`equidistance_check`].
#[derive(Debug, Clone)]
pub struct MemberDistance {
    pub index: usize,
    pub weight: f64,
    pub divergence: f64,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct EquidistanceReport {
    pub ok: bool,
    pub value: f64,
    pub members: Vec<MemberDistance>,
}

/// Optimality conditions of a converged solve: members carrying weight
/// must sit at the common divergence `value` (within `tol`), and
/// zero-weight members must not exceed it by more than `tol`.
pub fn equidistance_check<D: MixtureFamily>(
    result: &CentroidResult<D>,
    family: &[D],
    tol: f64,
) -> EquidistanceReport {
    let mut members = Vec::with_capacity(family.len());
    let mut all_ok = true;
    for (index, member) in family.iter().enumerate() {
        let divergence = member.divergence_from(&result.centroid);
        let weight = result.weights.get(index);
        let ok = if weight > tol {
            math::abs(divergence - result.value) <= tol
        } else {
            divergence <= result.value + tol
        };
        all_ok &= ok;
        members.push(MemberDistance {
            index,
            weight,
            divergence,
            ok,
        });
    }
    EquidistanceReport {
        ok: all_ok,
        value: result.value,
        members,
    }
}
