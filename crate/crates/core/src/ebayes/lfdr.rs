//! Local-false-discovery-rate estimators built on a histogram of
//! z-transformed p-values, and step-up q-values.

use alloc::vec::Vec;

use crate::ebayes::{LfdrMethod, LfdrVector};
use crate::error::{Error, Result};
use crate::math;
use crate::numeric::nelder_mead_max;
use crate::special::{normal_cdf, normal_pdf, normal_quantile};

/// Density estimation needs this many hypotheses.
pub const MIN_HYPOTHESES: usize = 50;

/// Tuning for the histogram estimators.
#[derive(Debug, Clone)]
pub struct LfdrConfig {
    /// Histogram bins over the z range.
    pub bins: usize,
    /// Threshold for the null-proportion estimate: the fraction of
    /// p-values above `lambda`, rescaled by the null mass above it.
    pub lambda: f64,
}

impl Default for LfdrConfig {
    fn default() -> Self {
        Self {
            bins: 20,
            lambda: 0.5,
        }
    }
}

impl LfdrConfig {
    fn validate(&self) -> Result<()> {
        if self.bins < 2 {
            return Err(Error::InvalidParameter {
                context: "lfdr histogram needs at least two bins",
            });
        }
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return Err(Error::InvalidParameter {
                context: "lambda must lie in (0, 1)",
            });
        }
        Ok(())
    }
}

/// Theoretical-null estimate: assumes z-values are standard normal under
/// the null.
#[derive(Debug, Clone)]
pub struct TheoreticalNullLfdr {
    pub lfdr: LfdrVector,
    /// Estimated null proportion.
    pub pi0_hat: f64,
    /// How many raw ratios exceeded one by more than 1e-6 before clamping.
    pub clamped: usize,
}

/// Empirical-null estimate: the null is a normal law fitted to the
/// central mass of the z-values.
#[derive(Debug, Clone)]
pub struct EmpiricalNullLfdr {
    pub lfdr: LfdrVector,
    pub pi0_hat: f64,
    /// Fitted null location.
    pub mu: f64,
    /// Fitted null scale.
    pub sigma: f64,
    pub clamped: usize,
}

/// Signed z-transform of two-sided p-values. The upper-tail quantile is
/// used so tiny p-values keep full precision.
fn z_values(p_values: &[f64], signs: &[f64]) -> Vec<f64> {
    p_values
        .iter()
        .zip(signs)
        .map(|(&p, &s)| {
            let p = p.clamp(1e-300, 1.0);
            let z = -normal_quantile(0.5 * p);
            if s < 0.0 {
                -z
            } else {
                z
            }
        })
        .collect()
}

fn validate_inputs(p_values: &[f64], signs: &[f64]) -> Result<()> {
    if p_values.len() < MIN_HYPOTHESES {
        return Err(Error::TooFewHypotheses {
            n: p_values.len(),
            min: MIN_HYPOTHESES,
        });
    }
    if p_values.len() != signs.len() {
        return Err(Error::DimensionMismatch {
            left: p_values.len(),
            right: signs.len(),
        });
    }
    for &p in p_values {
        if !p.is_finite() || !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability {
                value: p,
                context: "p-value",
            });
        }
    }
    Ok(())
}

/// Histogram density over the z range with linear interpolation between
/// bin centers.
struct HistogramDensity {
    z_min: f64,
    width: f64,
    density: Vec<f64>,
}

impl HistogramDensity {
    fn fit(z: &[f64], bins: usize) -> Self {
        let z_min = z.iter().copied().fold(f64::INFINITY, f64::min);
        let z_max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let width = ((z_max - z_min) / bins as f64).max(1e-12);
        let mut counts = alloc::vec![0usize; bins];
        for &zj in z {
            let k = (((zj - z_min) / width) as usize).min(bins - 1);
            counts[k] += 1;
        }
        let norm = z.len() as f64 * width;
        let density = counts.iter().map(|&c| c as f64 / norm).collect();
        Self {
            z_min,
            width,
            density,
        }
    }

    fn at(&self, z: f64) -> f64 {
        let bins = self.density.len();
        let u = (z - self.z_min) / self.width - 0.5;
        let value = if u <= 0.0 {
            self.density[0]
        } else if u >= (bins - 1) as f64 {
            self.density[bins - 1]
        } else {
            let k = u as usize;
            let frac = u - k as f64;
            self.density[k] * (1.0 - frac) + self.density[k + 1] * frac
        };
        value.max(1e-300)
    }
}

/// Fraction of p-values above `lambda` rescaled by the null probability
/// of landing there.
fn pi0_estimate(p_values: &[f64], lambda: f64, null_mass_above: f64) -> f64 {
    let above = p_values.iter().filter(|&&p| p > lambda).count() as f64;
    (above / (p_values.len() as f64 * null_mass_above)).clamp(0.0, 1.0)
}

fn ratio_to_lfdr(pi0: f64, f0: f64, fhat: f64, clamped: &mut usize) -> f64 {
    let raw = pi0 * f0 / fhat;
    if raw > 1.0 + 1e-6 {
        *clamped += 1;
    }
    raw.clamp(0.0, 1.0)
}

/// LFDR under the theoretical null: standard normal null density against
/// the histogram marginal, scaled by the estimated null proportion.
///
/// `signs` carries the direction of each test statistic; only its sign
/// is used.
pub fn lfdr_theoretical(
    p_values: &[f64],
    signs: &[f64],
    config: &LfdrConfig,
) -> Result<TheoreticalNullLfdr> {
    validate_inputs(p_values, signs)?;
    config.validate()?;
    let z = z_values(p_values, signs);
    let marginal = HistogramDensity::fit(&z, config.bins);
    let pi0_hat = pi0_estimate(p_values, config.lambda, 1.0 - config.lambda);
    let mut clamped = 0;
    let values: Vec<f64> = z
        .iter()
        .map(|&zj| ratio_to_lfdr(pi0_hat, normal_pdf(zj), marginal.at(zj), &mut clamped))
        .collect();
    Ok(TheoreticalNullLfdr {
        lfdr: LfdrVector::new(values, LfdrMethod::TheoreticalNull)?,
        pi0_hat,
        clamped,
    })
}

/// LFDR under an empirical null: a normal law fitted by truncated maximum
/// likelihood to the central half of the z-values replaces the standard
/// normal, and the null proportion is rescaled by the fitted null mass.
pub fn lfdr_empirical(
    p_values: &[f64],
    signs: &[f64],
    config: &LfdrConfig,
) -> Result<EmpiricalNullLfdr> {
    validate_inputs(p_values, signs)?;
    config.validate()?;
    let z = z_values(p_values, signs);
    let (mu, sigma) = truncated_normal_mle(&z)?;

    let marginal = HistogramDensity::fit(&z, config.bins);
    // null mass of the region p > lambda, i.e. |z| below the two-sided
    // threshold, under the fitted null
    let c = -normal_quantile(0.5 * config.lambda);
    let null_mass = (normal_cdf((c - mu) / sigma) - normal_cdf((-c - mu) / sigma)).max(1e-12);
    let pi0_hat = pi0_estimate(p_values, config.lambda, null_mass);

    let mut clamped = 0;
    let values: Vec<f64> = z
        .iter()
        .map(|&zj| {
            let f0 = normal_pdf((zj - mu) / sigma) / sigma;
            ratio_to_lfdr(pi0_hat, f0, marginal.at(zj), &mut clamped)
        })
        .collect();
    Ok(EmpiricalNullLfdr {
        lfdr: LfdrVector::new(values, LfdrMethod::EmpiricalNull)?,
        pi0_hat,
        mu,
        sigma,
        clamped,
    })
}

/// Maximum likelihood for a normal null observed through the central
/// window between the sample quartiles: interior points contribute their
/// density, the flanks only their counts. The count terms pin the window
/// quantiles, which is what identifies the scale. Two-parameter numeric
/// maximization with the scale in log space.
fn truncated_normal_mle(z: &[f64]) -> Result<(f64, f64)> {
    let n = z.len();
    let mut sorted = z.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    let a = sorted[n / 4];
    let b = sorted[(3 * n) / 4];
    let central: Vec<f64> = sorted
        .iter()
        .copied()
        .filter(|&v| v >= a && v <= b)
        .collect();
    if central.len() < 10 || b - a <= 0.0 {
        return Err(Error::MleFailure { grad_norm: f64::NAN });
    }
    let n_below = sorted.iter().filter(|&&v| v < a).count() as f64;
    let n_above = sorted.iter().filter(|&&v| v > b).count() as f64;
    let m = central.len() as f64;
    let mean: f64 = central.iter().sum::<f64>() / m;
    let full_sd: f64 =
        math::sqrt(sorted.iter().map(|&v| (v - mean) * (v - mean)).sum::<f64>() / n as f64);
    let sigma0 = full_sd.max(1e-3);

    let log_lik = |params: &[f64]| -> f64 {
        let mu = params[0];
        let sigma = math::exp(params[1]);
        let fa = normal_cdf((a - mu) / sigma);
        let fb = normal_cdf((b - mu) / sigma);
        if fa <= 1e-300 || fb >= 1.0 - 1e-16 {
            return -1e300;
        }
        let mut ll = n_below * math::ln(fa) + n_above * math::ln(1.0 - fb) - m * math::ln(sigma);
        for &v in &central {
            let u = (v - mu) / sigma;
            ll -= 0.5 * u * u;
        }
        ll
    };

    let start = [mean, math::ln(sigma0)];
    let scale = [0.25 * sigma0, 0.25];
    let (best, _, converged) = nelder_mead_max(&log_lik, &start, &scale, 2000, 1e-12);
    if !converged {
        let grad_norm = numeric_grad_norm(&log_lik, &best);
        if grad_norm > 1e-4 {
            return Err(Error::MleFailure { grad_norm });
        }
    }
    Ok((best[0], math::exp(best[1])))
}

fn numeric_grad_norm(f: &impl Fn(&[f64]) -> f64, x: &[f64]) -> f64 {
    let h = 1e-6;
    let mut sq = 0.0;
    for i in 0..x.len() {
        let mut hi = x.to_vec();
        let mut lo = x.to_vec();
        hi[i] += h;
        lo[i] -= h;
        let g = (f(&hi) - f(&lo)) / (2.0 * h);
        sq += g * g;
    }
    math::sqrt(sq)
}

/// Step-up adjusted p-values: `q_(k) = min_{m >= k} N p_(m) / m`, clamped
/// to one and mapped back to input order. The conservative unit null
/// proportion is used.
pub fn q_values(p_values: &[f64]) -> Result<LfdrVector> {
    q_values_with_pi0(p_values, 1.0)
}

/// Step-up q-values scaled by a null-proportion estimate in `(0, 1]`.
pub fn q_values_with_pi0(p_values: &[f64], pi0: f64) -> Result<LfdrVector> {
    if p_values.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if !(pi0 > 0.0 && pi0 <= 1.0) {
        return Err(Error::InvalidParameter {
            context: "pi0 must lie in (0, 1]",
        });
    }
    for &p in p_values {
        if !p.is_finite() || !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability {
                value: p,
                context: "p-value",
            });
        }
    }
    let n = p_values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        p_values[i]
            .partial_cmp(&p_values[j])
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    let mut q = alloc::vec![0.0; n];
    let mut running = 1.0_f64;
    for rank in (0..n).rev() {
        let idx = order[rank];
        let adjusted = pi0 * n as f64 * p_values[idx] / (rank + 1) as f64;
        running = running.min(adjusted.min(1.0));
        q[idx] = running;
    }
    LfdrVector::new(q, LfdrMethod::QValue)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn q_values_hand_example() {
        let q = q_values(&[0.01, 0.02, 0.03]).unwrap();
        for v in &q.values {
            assert!((v - 0.03).abs() < 1e-15);
        }
    }

    #[test]
    fn q_values_single_and_saturated() {
        assert_eq!(q_values(&[0.2]).unwrap().values, vec![0.2]);
        assert_eq!(q_values(&[1.0, 1.0]).unwrap().values, vec![1.0, 1.0]);
    }

    #[test]
    fn q_values_monotone_in_p() {
        let p = [0.5, 0.001, 0.04, 0.04, 0.9, 0.2];
        let q = q_values(&p).unwrap();
        let mut pairs: Vec<(f64, f64)> = p.iter().copied().zip(q.values.iter().copied()).collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for w in pairs.windows(2) {
            assert!(w[0].1 <= w[1].1 + 1e-15);
        }
    }

    #[test]
    fn q_values_rejects_bad_inputs() {
        assert!(q_values(&[]).is_err());
        assert!(q_values(&[1.5]).is_err());
        assert!(q_values_with_pi0(&[0.5], 0.0).is_err());
    }

    #[test]
    fn z_transform_is_signed_and_precise() {
        let z = z_values(&[0.05, 0.05], &[1.0, -1.0]);
        assert!((z[0] - 1.959963984540054).abs() < 1e-12);
        assert!((z[0] + z[1]).abs() < 1e-15);
        // tiny p-values keep precision through the upper-tail route
        let z = z_values(&[1e-100], &[1.0]);
        assert!(z[0] > 21.0 && z[0].is_finite());
    }

    #[test]
    fn too_few_hypotheses_rejected() {
        let p = vec![0.5; 10];
        let s = vec![1.0; 10];
        assert!(matches!(
            lfdr_theoretical(&p, &s, &LfdrConfig::default()),
            Err(Error::TooFewHypotheses { n: 10, min: 50 })
        ));
    }

    #[test]
    fn constant_null_parts_give_unit_lfdr() {
        // if the marginal equals the null density and pi0 = 1, the ratio
        // is one everywhere
        let mut clamped = 0;
        for f in [0.05, 0.2, 0.39] {
            assert_eq!(ratio_to_lfdr(1.0, f, f, &mut clamped), 1.0);
        }
        assert_eq!(clamped, 0);
    }

    #[test]
    fn histogram_density_integrates_to_one() {
        let z: Vec<f64> = (0..200).map(|i| -3.0 + 6.0 * i as f64 / 199.0).collect();
        let h = HistogramDensity::fit(&z, 20);
        let total: f64 = h.density.iter().map(|d| d * h.width).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
