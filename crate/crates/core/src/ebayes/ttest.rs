//! One-sample t tests against a zero mean.

use alloc::vec::Vec;

use crate::ebayes::{ExpressionMatrix, TestResult};
use crate::error::{Error, Result};
use crate::math;
use crate::special::student_t_cdf;

/// Per-gene one-sample t statistic and two-sided p-value from the central
/// t distribution with `replicates - 1` degrees of freedom.
///
/// A gene with zero sample variance has no defined statistic: if its mean
/// is also zero it contributes `t = 0, p = 1`; otherwise the gene is
/// reported in a degenerate-gene error.
pub fn t_test(x: &ExpressionMatrix) -> Result<TestResult> {
    let n = x.replicates();
    let df = n - 1;
    let mut t_stats = Vec::with_capacity(x.genes());
    let mut p_values = Vec::with_capacity(x.genes());
    let mut degenerate = Vec::new();

    for gene in 0..x.genes() {
        let row = x.row(gene);
        let mean = row.iter().sum::<f64>() / n as f64;
        let ss: f64 = row.iter().map(|&v| (v - mean) * (v - mean)).sum();
        let var = ss / df as f64;
        if var == 0.0 {
            if mean == 0.0 {
                t_stats.push(0.0);
                p_values.push(1.0);
            } else {
                degenerate.push(x.gene_ids()[gene].clone());
                t_stats.push(f64::NAN);
                p_values.push(f64::NAN);
            }
            continue;
        }
        let t = mean / (math::sqrt(var) / math::sqrt(n as f64));
        let p = 2.0 * (1.0 - student_t_cdf(math::abs(t), df as f64));
        t_stats.push(t);
        p_values.push(p.clamp(0.0, 1.0));
    }

    if !degenerate.is_empty() {
        return Err(Error::DegenerateGenes { ids: degenerate });
    }
    Ok(TestResult {
        t_stats,
        p_values,
        df,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn matrix(rows: Vec<Vec<f64>>) -> ExpressionMatrix {
        let ids = (0..rows.len()).map(|i| alloc::format!("g{i}")).collect();
        ExpressionMatrix::new(ids, rows).unwrap()
    }

    #[test]
    fn zero_mean_row_gives_p_one() {
        let r = t_test(&matrix(vec![vec![1.0, -1.0]])).unwrap();
        assert_eq!(r.t_stats[0], 0.0);
        assert_eq!(r.p_values[0], 1.0);
        assert_eq!(r.df, 1);
    }

    #[test]
    fn simple_row_reference() {
        // mean 2, sd 1, t = 2 sqrt(3); p from the df-2 closed form
        let r = t_test(&matrix(vec![vec![1.0, 2.0, 3.0]])).unwrap();
        assert!((r.t_stats[0] - 3.4641016151377544).abs() < 1e-12);
        assert!((r.p_values[0] - 0.074179900227448546).abs() < 1e-12);
        assert_eq!(r.df, 2);
    }

    #[test]
    fn sign_flip_leaves_p_unchanged() {
        let a = t_test(&matrix(vec![vec![0.3, 1.2, -0.4, 2.0]])).unwrap();
        let b = t_test(&matrix(vec![vec![-0.3, -1.2, 0.4, -2.0]])).unwrap();
        assert_eq!(a.p_values[0], b.p_values[0]);
        assert_eq!(a.t_stats[0], -b.t_stats[0]);
    }

    #[test]
    fn constant_nonzero_row_is_degenerate() {
        let m = matrix(vec![vec![2.0, 2.0, 2.0], vec![0.0, 1.0, 2.0]]);
        match t_test(&m) {
            Err(Error::DegenerateGenes { ids }) => assert_eq!(ids, vec!["g0".to_string()]),
            other => panic!("expected degenerate gene error, got {other:?}"),
        }
    }

    #[test]
    fn all_zero_row_is_not_degenerate() {
        let r = t_test(&matrix(vec![vec![0.0, 0.0, 0.0]])).unwrap();
        assert_eq!(r.t_stats[0], 0.0);
        assert_eq!(r.p_values[0], 1.0);
    }
}
