//! Large-scale testing pipeline: per-gene t statistics, conflicting
//! local-false-discovery-rate estimators, likelihood-based plausibility
//! bounds, and their hedged combination.

mod combine_lfdr;
mod lfdr;
mod likelihood;
mod simulate;
mod ttest;

pub use combine_lfdr::{combine_lfdr, CombinedLfdr};
pub use lfdr::{
    lfdr_empirical, lfdr_theoretical, q_values, q_values_with_pi0, EmpiricalNullLfdr, LfdrConfig,
    TheoreticalNullLfdr,
};
pub use likelihood::{
    combine_p_pair, lfdr_lower_bound, noncentral_t_pdf, pvalue_plausible_lower_bound,
    LowerBoundResult,
};
pub use simulate::{simulate_dataset, SimulationConfig};
pub use ttest::t_test;

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Complete-case expression data: one row of log-ratios per gene.
#[derive(Debug, Clone)]
pub struct ExpressionMatrix {
    gene_ids: Vec<String>,
    values: Vec<Vec<f64>>,
    replicates: usize,
}

impl ExpressionMatrix {
    /// Rows must be complete (no NaN) and share a length of at least two.
    pub fn new(gene_ids: Vec<String>, values: Vec<Vec<f64>>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter {
                context: "expression matrix needs at least one gene",
            });
        }
        if gene_ids.len() != values.len() {
            return Err(Error::DimensionMismatch {
                left: gene_ids.len(),
                right: values.len(),
            });
        }
        let replicates = values[0].len();
        if replicates < 2 {
            return Err(Error::InvalidParameter {
                context: "expression matrix needs at least two replicates",
            });
        }
        for row in &values {
            if row.len() != replicates {
                return Err(Error::DimensionMismatch {
                    left: replicates,
                    right: row.len(),
                });
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter {
                    context: "expression values must be finite (complete cases only)",
                });
            }
        }
        Ok(Self {
            gene_ids,
            values,
            replicates,
        })
    }

    pub fn genes(&self) -> usize {
        self.values.len()
    }

    pub fn replicates(&self) -> usize {
        self.replicates
    }

    pub fn gene_ids(&self) -> &[String] {
        &self.gene_ids
    }

    pub fn row(&self, gene: usize) -> &[f64] {
        &self.values[gene]
    }
}

/// Per-gene t statistics and two-sided p-values.
#[derive(Debug, Clone)]
pub struct TestResult {
    pub t_stats: Vec<f64>,
    pub p_values: Vec<f64>,
    /// Degrees of freedom, `replicates - 1`.
    pub df: usize,
}

/// Which estimator produced an LFDR vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LfdrMethod {
    TheoreticalNull,
    EmpiricalNull,
    QValue,
    LowerBound,
    Combined,
}

impl LfdrMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            LfdrMethod::TheoreticalNull => "theoretical-null",
            LfdrMethod::EmpiricalNull => "empirical-null",
            LfdrMethod::QValue => "q-value",
            LfdrMethod::LowerBound => "lower-bound",
            LfdrMethod::Combined => "combined",
        }
    }
}

/// Per-gene posterior null probabilities produced by one method.
#[derive(Debug, Clone)]
pub struct LfdrVector {
    pub values: Vec<f64>,
    pub method: LfdrMethod,
}

impl LfdrVector {
    pub fn new(values: Vec<f64>, method: LfdrMethod) -> Result<Self> {
        for &v in &values {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidProbability {
                    value: v,
                    context: "LfdrVector",
                });
            }
        }
        Ok(Self { values, method })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}
