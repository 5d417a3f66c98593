//! Noncentral-t likelihoods, posterior-odds lower bounds, and the
//! combination rules for pairs of p-values.

use alloc::vec::Vec;

use crate::centroid::SolverConfig;
use crate::combine::{combine_binary, Interval};
use crate::ebayes::{t_test, ExpressionMatrix, LfdrMethod, LfdrVector};
use crate::error::{Error, Result};
use crate::math;
use crate::numeric::{adaptive_simpson, golden_section_max};
use crate::special::{normal_pdf, scaled_chi_pdf};

/// Density of the noncentral t law at a point, by quadrature over the
/// chi-distributed scale mixing variable.
///
/// The integrand is the chi body times a normal factor whose peak sits at
/// `u = ncp / t` with width `1/|t|`; explicit knots bracket both features
/// so the adaptive rule cannot step over a narrow peak.
fn noncentral_t_density_signed(t: f64, df: f64, ncp: f64, tol: f64) -> Result<f64> {
    // beyond this the chi factor carries no mass at the 1e-12 level
    let u_max = math::sqrt(120.0 / df) + 3.0;
    let integrand = move |u: f64| u * normal_pdf(t * u - ncp) * scaled_chi_pdf(u, df);

    let mut knots = alloc::vec![0.0, 0.25, 0.5, 1.0, 2.0, u_max];
    if t != 0.0 {
        let w = 1.0 / math::abs(t);
        let u0 = ncp / t;
        // peak inside the domain, or a boundary layer at zero when the
        // peak falls outside
        let center = if u0 > 0.0 { u0 } else { 0.0 };
        for k in [-6.0, -3.0, -1.0, 0.0, 1.0, 2.0, 3.0, 6.0, 10.0] {
            let knot = center + k * w;
            if knot > 0.0 && knot < u_max {
                knots.push(knot);
            }
        }
    }
    knots.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    knots.dedup_by(|a, b| math::abs(*a - *b) < 1e-12);

    let seg_tol = tol / knots.len() as f64;
    let mut total = 0.0;
    for pair in knots.windows(2) {
        total += adaptive_simpson(&integrand, pair[0], pair[1], seg_tol)?;
    }
    Ok(total.max(0.0))
}

/// Production tolerance of the public density.
const PDF_TOL: f64 = 1e-11;

fn folded_density(t: f64, df: f64, ncp: f64, tol: f64) -> Result<f64> {
    Ok(noncentral_t_density_signed(t, df, ncp, tol)?
        + noncentral_t_density_signed(-t, df, ncp, tol)?)
}

/// Density of `|T|` at `t >= 0` when `T` is noncentral t with `df`
/// degrees of freedom and noncentrality `ncp`: the sum of the signed
/// densities at `t` and `-t`.
pub fn noncentral_t_pdf(t: f64, df: usize, ncp: f64) -> Result<f64> {
    if df == 0 {
        return Err(Error::InvalidParameter {
            context: "degrees of freedom must be at least one",
        });
    }
    if !t.is_finite() || t < 0.0 {
        return Err(Error::DomainError {
            value: t,
            context: "noncentral_t_pdf (needs t >= 0)",
        });
    }
    let df = df as f64;
    folded_density(t, df, ncp, PDF_TOL)
}

/// Per-gene LFDR lower bounds from the likelihood and a prior-odds floor.
#[derive(Debug, Clone)]
pub struct LowerBoundResult {
    pub bounds: LfdrVector,
    /// Maximizing effect size (reciprocal coefficient of variation) per
    /// gene; the likelihood is symmetric in its sign.
    pub theta_hat: Vec<f64>,
    /// Genes whose likelihood maximization failed; their bound is zero,
    /// the most permissive value.
    pub flagged: Vec<usize>,
}

/// Likelihood-ratio lower bound on each gene's LFDR.
///
/// The Bayes factor for gene `j` is bounded below by
/// `L_j(0) / max_theta L_j(theta)` where `L_j(theta)` is the density of
/// the absolute t statistic under noncentrality `sqrt(n) * theta`.
/// Multiplying by the prior odds floor `pi0_lower / (1 - pi0_lower)`
/// bounds the posterior odds, hence the LFDR.
pub fn lfdr_lower_bound(x: &ExpressionMatrix, pi0_lower: f64) -> Result<LowerBoundResult> {
    if !(pi0_lower > 0.0 && pi0_lower < 1.0) {
        return Err(Error::InvalidParameter {
            context: "pi0_lower must lie strictly between 0 and 1",
        });
    }
    let tests = t_test(x)?;
    let n = x.replicates() as f64;
    let df = tests.df;
    let prior_odds = pi0_lower / (1.0 - pi0_lower);

    let mut bounds = Vec::with_capacity(x.genes());
    let mut theta_hat = Vec::with_capacity(x.genes());
    let mut flagged = Vec::new();

    for (gene, &t) in tests.t_stats.iter().enumerate() {
        let abs_t = math::abs(t);
        let gene_result = (|| -> Result<(f64, f64)> {
            let df_f = df as f64;
            let l0 = folded_density(abs_t, df_f, 0.0, PDF_TOL)?;
            // the likelihood is symmetric in theta, so search theta >= 0;
            // the range provably covers the maximizer for observed t
            let theta_max = 10.0 * abs_t / math::sqrt(n) + 5.0;
            // the search only ranks candidates, so it can run at a looser
            // quadrature tolerance; the ratio is re-evaluated tightly
            let objective = |theta: f64| {
                folded_density(abs_t, df_f, math::sqrt(n) * theta, 1e-8)
                    .unwrap_or(f64::NEG_INFINITY)
            };
            let (theta_best, search_best) = golden_section_max(&objective, 0.0, theta_max, 1e-8);
            if !search_best.is_finite() {
                return Err(Error::QuadratureFailure { attained: f64::NAN });
            }
            let l_best = folded_density(abs_t, df_f, math::sqrt(n) * theta_best, PDF_TOL)?;
            // theta = 0 is always admissible, so the maximum is at least L(0)
            if l0 >= l_best {
                Ok((0.0, 1.0))
            } else {
                Ok((theta_best, l0 / l_best))
            }
        })();
        match gene_result {
            Ok((theta, bf)) => {
                let odds = prior_odds * bf;
                bounds.push(odds / (1.0 + odds));
                theta_hat.push(theta);
            }
            Err(_) => {
                flagged.push(gene);
                bounds.push(0.0);
                theta_hat.push(f64::NAN);
            }
        }
    }

    Ok(LowerBoundResult {
        bounds: LfdrVector::new(bounds, LfdrMethod::LowerBound)?,
        theta_hat,
        flagged,
    })
}

/// Lowest plausible posterior probability of a null hypothesis given a
/// two-sided p-value and a floor on its prior probability.
///
/// Valid for `0 < p <= 1/e`, where `e p ln(1/p)` bounds the Bayes factor
/// from below; the result is capped at the prior floor itself.
pub fn pvalue_plausible_lower_bound(p: f64, pi_prior_lower: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0 / core::f64::consts::E) {
        return Err(Error::DomainError {
            value: p,
            context: "pvalue_plausible_lower_bound (needs 0 < p <= 1/e)",
        });
    }
    if !(pi_prior_lower > 0.0 && pi_prior_lower < 1.0) {
        return Err(Error::InvalidParameter {
            context: "pi_prior_lower must lie strictly between 0 and 1",
        });
    }
    let bf_lower = core::f64::consts::E * p * math::ln(1.0 / p);
    let first = 1.0 / (1.0 + (1.0 - pi_prior_lower) / (pi_prior_lower * bf_lower));
    Ok(first.min(pi_prior_lower))
}

/// Combination of an ordered pair of p-values under a plausibility floor:
/// the floor itself when both fall below it, the larger p-value when only
/// it is plausible, and the hedged mixture of the two when both are.
pub fn combine_p_pair(p1: f64, p2: f64, bound: f64, config: &SolverConfig) -> Result<f64> {
    if !(0.0..=1.0).contains(&p1) || !(0.0..=1.0).contains(&p2) || p1 > p2 {
        return Err(Error::InvalidParameter {
            context: "combine_p_pair needs 0 <= p1 <= p2 <= 1",
        });
    }
    if !(0.0..=1.0).contains(&bound) {
        return Err(Error::InvalidParameter {
            context: "combine_p_pair needs bound in [0, 1]",
        });
    }
    if p2 < bound {
        Ok(bound)
    } else if p1 < bound {
        Ok(p2)
    } else {
        let plausible = Interval::new(bound, 1.0)?;
        Ok(combine_binary(&[p1, p2], &plausible, config)?.p_plus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::student_t_pdf;
    use alloc::vec;

    #[test]
    fn central_case_matches_folded_closed_form() {
        for df in [1usize, 2, 5, 10] {
            let mut t = 0.0;
            while t <= 5.0 {
                let quad = noncentral_t_pdf(t, df, 0.0).unwrap();
                let folded = 2.0 * student_t_pdf(t, df as f64);
                assert!(
                    (quad - folded).abs() < 1e-8,
                    "df {df} t {t}: {quad} vs {folded}"
                );
                t += 0.5;
            }
        }
    }

    #[test]
    fn density_normalizes_on_half_line() {
        // integrate the folded density outward until the mass added per
        // block is negligible
        for (df, ncp) in [(5usize, 0.0), (5, 3.0), (2, 1.5)] {
            let mut total = 0.0;
            let mut t0 = 0.0;
            loop {
                let block = adaptive_simpson(
                    &|t: f64| noncentral_t_pdf(t, df, ncp).unwrap(),
                    t0,
                    t0 + 5.0,
                    1e-9,
                )
                .unwrap();
                total += block;
                t0 += 5.0;
                if block < 1e-9 || t0 > 2000.0 {
                    break;
                }
            }
            assert!((total - 1.0).abs() < 1e-6, "df {df} ncp {ncp}: {total}");
        }
    }

    #[test]
    fn refinement_oracle_at_positive_ncp() {
        // independent high-resolution reference: 64 fixed panels, each
        // integrated at a 100x finer tolerance
        let df = 5.0;
        let t = 3.0;
        let ncp = 3.0;
        let u_max = math::sqrt(120.0 / df) + 3.0;
        let mut fine = 0.0;
        for side in [1.0f64, -1.0] {
            let f = move |u: f64| u * normal_pdf(side * t * u - ncp) * scaled_chi_pdf(u, df);
            for k in 0..64 {
                let a = u_max * k as f64 / 64.0;
                let b = u_max * (k + 1) as f64 / 64.0;
                fine += adaptive_simpson(&f, a, b, 1e-13 / 64.0).unwrap();
            }
        }
        let prod = noncentral_t_pdf(t, 5, ncp).unwrap();
        assert!((prod - fine).abs() < 1e-9, "{prod} vs {fine}");
    }

    #[test]
    fn rejects_negative_t_and_zero_df() {
        assert!(noncentral_t_pdf(-0.5, 5, 0.0).is_err());
        assert!(noncentral_t_pdf(1.0, 0, 0.0).is_err());
    }

    #[test]
    fn lower_bound_at_zero_t() {
        // a zero statistic maximizes the likelihood at zero effect,
        // giving Bayes factor one and bound pi0/(pi0 + (1 - pi0)) ... = 0.8 at 4:1 odds
        let ids = vec![alloc::string::String::from("g0")];
        let x = ExpressionMatrix::new(ids, vec![vec![1.0, -1.0, 1.0, -1.0]]).unwrap();
        let r = lfdr_lower_bound(&x, 0.8).unwrap();
        assert_eq!(r.theta_hat[0], 0.0);
        assert!((r.bounds.values[0] - 0.8).abs() < 1e-12);
        assert!(r.flagged.is_empty());
    }

    #[test]
    fn lower_bound_vanishes_for_huge_t() {
        let ids = vec![alloc::string::String::from("g0")];
        let x =
            ExpressionMatrix::new(ids, vec![vec![10.0, 10.1, 9.9, 10.05, 9.95, 10.0]]).unwrap();
        let r = lfdr_lower_bound(&x, 0.8).unwrap();
        assert!(r.bounds.values[0] < 1e-6, "bound {}", r.bounds.values[0]);
    }

    #[test]
    fn lower_bound_monotone_in_prior_floor() {
        let ids = (0..3).map(|i| alloc::format!("g{i}")).collect();
        let x = ExpressionMatrix::new(
            ids,
            vec![
                vec![0.1, -0.2, 0.3, 0.05],
                vec![1.0, 1.2, 0.8, 1.1],
                vec![-0.5, 0.4, -0.1, 0.2],
            ],
        )
        .unwrap();
        let lo = lfdr_lower_bound(&x, 0.5).unwrap();
        let hi = lfdr_lower_bound(&x, 0.9).unwrap();
        for (a, b) in lo.bounds.values.iter().zip(&hi.bounds.values) {
            assert!(a <= b);
        }
    }

    #[test]
    fn pvalue_bound_hand_value() {
        // e * 0.01 * ln 100 = 0.12518...; the capped term stays below 0.5
        let got = pvalue_plausible_lower_bound(0.01, 0.5).unwrap();
        assert!((got - 0.11125449881019477).abs() < 1e-12, "got {got}");
    }

    #[test]
    fn pvalue_bound_at_validity_edge() {
        let p = 1.0 / core::f64::consts::E;
        for pi in [0.3, 0.5, 0.8] {
            let got = pvalue_plausible_lower_bound(p, pi).unwrap();
            assert!((got - pi).abs() < 1e-12);
        }
    }

    #[test]
    fn pvalue_bound_rejects_out_of_domain() {
        assert!(pvalue_plausible_lower_bound(0.5, 0.5).is_err());
        assert!(pvalue_plausible_lower_bound(0.0, 0.5).is_err());
        assert!(pvalue_plausible_lower_bound(0.01, 1.0).is_err());
    }

    #[test]
    fn pvalue_bound_cap_bites_as_prior_grows() {
        // with the prior floor near one the cap term dominates
        let p = 0.2;
        let got = pvalue_plausible_lower_bound(p, 0.999).unwrap();
        let bf = core::f64::consts::E * p * math::ln(1.0 / p);
        let first = 1.0 / (1.0 + (1.0 - 0.999) / (0.999 * bf));
        assert!((got - first.min(0.999)).abs() < 1e-15);
    }

    #[test]
    fn p_pair_case_rules() {
        let cfg = SolverConfig::default();
        assert_eq!(combine_p_pair(0.001, 0.005, 0.01, &cfg).unwrap(), 0.01);
        assert_eq!(combine_p_pair(0.005, 0.05, 0.01, &cfg).unwrap(), 0.05);
        let both = combine_p_pair(0.04, 0.1, 0.01, &cfg).unwrap();
        assert!(both > 0.04 && both < 0.1);
    }

    #[test]
    fn p_pair_rejects_unordered() {
        let cfg = SolverConfig::default();
        assert!(combine_p_pair(0.5, 0.1, 0.01, &cfg).is_err());
    }
}
