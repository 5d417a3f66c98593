//! Extreme members of a point family.
//!
//! A family member is extreme when it is not a convex combination of the
//! other members. Only extreme members can carry centroid weight, so
//! identifying them shrinks the capacity problem. Membership is decided
//! by a small feasibility program per point: minimize the residual of
//! reproducing the point from the others over the weight simplex. The
//! program is solved in the family-sized Gram space (an active-set
//! least-squares iteration), so high ambient dimension costs only the
//! inner products.

use alloc::vec::Vec;

use crate::dist::{BernoulliProduct, FiniteDistribution};
use crate::error::{Error, Result};
use crate::math;

/// A point is declared reproducible (non-extreme) when the best convex
/// combination of the others misses it by no more than this, in the
/// infinity norm. One order above the solver tolerance so near-hull
/// round-off cannot flip the classification.
pub const RESIDUAL_TOL: f64 = 1e-9;

/// Coordinates within this of each other are treated as the same point.
pub const MERGE_TOL: f64 = 1e-12;

/// A finite set of points with a common dimension, coordinates in [0, 1].
#[derive(Debug, Clone)]
pub struct PointSet {
    points: Vec<Vec<f64>>,
    dim: usize,
}

impl PointSet {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::InvalidParameter {
                context: "zero-dimensional points",
            });
        }
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: p.len(),
                });
            }
            for &x in p {
                if !x.is_finite() || !(-1e-12..=1.0 + 1e-12).contains(&x) {
                    return Err(Error::InvalidProbability {
                        value: x,
                        context: "PointSet",
                    });
                }
            }
        }
        Ok(Self { points, dim })
    }

    /// Tuple representations of finite distributions.
    pub fn from_distributions(family: &[FiniteDistribution]) -> Result<Self> {
        Self::new(family.iter().map(|d| d.probs().to_vec()).collect())
    }

    /// Null-probability vectors of independent products.
    pub fn from_products(family: &[BernoulliProduct]) -> Result<Self> {
        Self::new(family.iter().map(|d| d.null_probs().to_vec()).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }
}

/// Convex-combination certificate for a removed point.
#[derive(Debug, Clone)]
pub struct HullCertificate {
    /// Index of the removed point in the input set.
    pub index: usize,
    /// Weights over [`ExtremeSubset::extreme`], in that order.
    pub weights: Vec<f64>,
    /// Infnorm reconstruction error of the certificate.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct ExtremeSubset {
    /// Indices of extreme input points, ascending. Duplicate points are
    /// represented by their first occurrence.
    pub extreme: Vec<usize>,
    /// One certificate per removed point, reconstructing it from the
    /// extreme members.
    pub certificates: Vec<HullCertificate>,
}

/// Indices of the points that are extreme in the convex hull of the set.
pub fn extreme_subset(ps: &PointSet) -> ExtremeSubset {
    let n = ps.len();

    // Merge coincident points first; weights on duplicates are not
    // identifiable.
    let mut rep: Vec<usize> = Vec::new();
    let mut rep_of = alloc::vec![0usize; n];
    for i in 0..n {
        match rep
            .iter()
            .position(|&r| same_point(ps.point(r), ps.point(i)))
        {
            Some(k) => rep_of[i] = k,
            None => {
                rep.push(i);
                rep_of[i] = rep.len() - 1;
            }
        }
    }

    let m = rep.len();
    let mut is_extreme = alloc::vec![false; m];
    if m == 1 {
        is_extreme[0] = true;
    } else {
        for k in 0..m {
            let target = ps.point(rep[k]);
            let others: Vec<&[f64]> = (0..m).filter(|&j| j != k).map(|j| ps.point(rep[j])).collect();
            let (_, residual) = min_convex_residual(target, &others);
            is_extreme[k] = residual > RESIDUAL_TOL;
        }
    }

    let extreme: Vec<usize> = (0..m).filter(|&k| is_extreme[k]).map(|k| rep[k]).collect();
    let extreme_points: Vec<&[f64]> = extreme.iter().map(|&i| ps.point(i)).collect();

    let mut certificates = Vec::new();
    for i in 0..n {
        if extreme.contains(&i) {
            continue;
        }
        let (weights, residual) = min_convex_residual(ps.point(i), &extreme_points);
        certificates.push(HullCertificate {
            index: i,
            weights,
            residual,
        });
    }

    ExtremeSubset {
        extreme,
        certificates,
    }
}

/// Extreme subset of one-dimensional values: the minimum and maximum.
/// Ties go to the lowest index.
pub fn binary_extremes(probs: &[f64]) -> Result<(usize, usize)> {
    if probs.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let mut min_idx = 0;
    let mut max_idx = 0;
    for (i, &p) in probs.iter().enumerate().skip(1) {
        if p < probs[min_idx] {
            min_idx = i;
        }
        if p > probs[max_idx] {
            max_idx = i;
        }
    }
    Ok((min_idx, max_idx))
}

fn same_point(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| math::abs(x - y) <= MERGE_TOL)
}

/// Minimizes `|| sum_k w_k p_k - target ||` over the weight simplex and
/// returns the weights with the attained infinity-norm residual.
///
/// Solved in the Gram space by an active-set iteration: repeatedly solve
/// the equality-constrained least squares on the current support (via an
/// eigendecomposition pseudo-inverse, so flat directions of the Gram
/// matrix are harmless), drop negative weights, and add support points
/// whose multiplier says they improve the fit.
pub(crate) fn min_convex_residual(target: &[f64], points: &[&[f64]]) -> (Vec<f64>, f64) {
    let m = points.len();
    if m == 0 {
        return (Vec::new(), f64::INFINITY);
    }
    let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    let mut gram = alloc::vec![0.0; m * m];
    let mut cross = alloc::vec![0.0; m];
    for i in 0..m {
        cross[i] = dot(points[i], target);
        for j in i..m {
            let v = dot(points[i], points[j]);
            gram[i * m + j] = v;
            gram[j * m + i] = v;
        }
    }

    let mut support: Vec<usize> = (0..m).collect();
    let mut lambda = alloc::vec![0.0; m];
    let max_rounds = 3 * m + 20;
    let mut best: Option<(Vec<f64>, f64)> = None;

    for _ in 0..max_rounds {
        let sol = solve_face(&gram, &cross, m, &support);
        if let Some((idx_in_support, _)) = sol
            .iter()
            .enumerate()
            .filter(|(_, &v)| v < -1e-10)
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap_or(core::cmp::Ordering::Equal))
        {
            if support.len() > 1 {
                support.remove(idx_in_support);
                continue;
            }
        }

        lambda.iter_mut().for_each(|v| *v = 0.0);
        let mut norm = 0.0;
        for (pos, &i) in support.iter().enumerate() {
            lambda[i] = sol[pos].max(0.0);
            norm += lambda[i];
        }
        if norm > 0.0 {
            lambda.iter_mut().for_each(|v| *v /= norm);
        } else {
            lambda[support[0]] = 1.0;
        }

        // KKT: gradient components on the support share a multiplier; an
        // excluded point with a smaller component would reduce the
        // residual.
        let mut grad = alloc::vec![0.0; m];
        for i in 0..m {
            let mut gi = -2.0 * cross[i];
            for j in 0..m {
                gi += 2.0 * gram[i * m + j] * lambda[j];
            }
            grad[i] = gi;
        }
        let mu = support.iter().map(|&i| grad[i]).fold(f64::NEG_INFINITY, f64::max);
        let scale = grad.iter().fold(1.0_f64, |a, &b| a.max(math::abs(b)));
        let candidate = (0..m)
            .filter(|i| !support.contains(i))
            .min_by(|&a, &b| grad[a].partial_cmp(&grad[b]).unwrap_or(core::cmp::Ordering::Equal));

        let residual = linf_residual(target, points, &lambda);
        if best.as_ref().is_none_or(|(_, r)| residual < *r) {
            best = Some((lambda.clone(), residual));
        }

        match candidate {
            Some(k) if grad[k] < mu - 1e-11 * scale => {
                support.push(k);
                support.sort_unstable();
            }
            _ => break,
        }
    }

    best.unwrap_or((lambda, f64::INFINITY))
}

/// Equality-constrained least squares on a support face: minimize the
/// Gram-space quadratic subject to the weights summing to one.
fn solve_face(gram: &[f64], cross: &[f64], m: usize, support: &[usize]) -> Vec<f64> {
    let s = support.len();
    if s == 1 {
        return alloc::vec![1.0];
    }
    // parameterize lambda = e_0 + Z y with z_k = e_{k+1} - e_0
    let g = |i: usize, j: usize| gram[support[i] * m + support[j]];
    let k = s - 1;
    let mut mat = alloc::vec![0.0; k * k];
    let mut rhs = alloc::vec![0.0; k];
    for a in 0..k {
        // Z^T (g - G e_0)
        rhs[a] = (cross[support[a + 1]] - g(a + 1, 0)) - (cross[support[0]] - g(0, 0));
        for b in 0..k {
            mat[a * k + b] = g(a + 1, b + 1) - g(a + 1, 0) - g(0, b + 1) + g(0, 0);
        }
    }
    let y = solve_psd_pinv(&mut mat, &rhs, k);
    let mut lambda = alloc::vec![0.0; s];
    lambda[0] = 1.0 - y.iter().sum::<f64>();
    lambda[1..].copy_from_slice(&y);
    lambda
}

/// Minimum-norm solution of a symmetric PSD system via cyclic Jacobi
/// eigendecomposition, dropping numerically-zero eigenvalues.
fn solve_psd_pinv(mat: &mut [f64], rhs: &[f64], n: usize) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        let a = mat[0];
        return alloc::vec![if math::abs(a) > 1e-300 { rhs[0] / a } else { 0.0 }];
    }
    // eigenvectors accumulate in v (row-major)
    let mut v = alloc::vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    for _sweep in 0..60 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += mat[p * n + q] * mat[p * n + q];
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = mat[p * n + q];
                if math::abs(apq) < 1e-300 {
                    continue;
                }
                let app = mat[p * n + p];
                let aqq = mat[q * n + q];
                let theta = 0.5 * (aqq - app) / apq;
                let t = if theta >= 0.0 {
                    1.0 / (theta + math::sqrt(1.0 + theta * theta))
                } else {
                    -1.0 / (-theta + math::sqrt(1.0 + theta * theta))
                };
                let c = 1.0 / math::sqrt(1.0 + t * t);
                let s = t * c;
                for i in 0..n {
                    let aip = mat[i * n + p];
                    let aiq = mat[i * n + q];
                    mat[i * n + p] = c * aip - s * aiq;
                    mat[i * n + q] = s * aip + c * aiq;
                }
                for j in 0..n {
                    let apj = mat[p * n + j];
                    let aqj = mat[q * n + j];
                    mat[p * n + j] = c * apj - s * aqj;
                    mat[q * n + j] = s * apj + c * aqj;
                }
                for i in 0..n {
                    let vip = v[i * n + p];
                    let viq = v[i * n + q];
                    v[i * n + p] = c * vip - s * viq;
                    v[i * n + q] = s * vip + c * viq;
                }
            }
        }
    }
    let mut eig_max = 0.0_f64;
    for i in 0..n {
        eig_max = eig_max.max(math::abs(mat[i * n + i]));
    }
    let cutoff = eig_max * 1e-13 * n as f64;
    let mut x = alloc::vec![0.0; n];
    for k in 0..n {
        let lam = mat[k * n + k];
        if math::abs(lam) <= cutoff {
            continue;
        }
        let mut proj = 0.0;
        for i in 0..n {
            proj += v[i * n + k] * rhs[i];
        }
        let coef = proj / lam;
        for i in 0..n {
            x[i] += coef * v[i * n + k];
        }
    }
    x
}

fn linf_residual(target: &[f64], points: &[&[f64]], lambda: &[f64]) -> f64 {
    let mut worst = 0.0_f64;
    for d in 0..target.len() {
        let mut acc = 0.0;
        for (k, p) in points.iter().enumerate() {
            acc += lambda[k] * p[d];
        }
        worst = worst.max(math::abs(acc - target[d]));
    }
    worst
}
