//! Hedged combination of conflicting probability distributions.
//!
//! Given a finite family of candidate distributions and interval constraints
//! on what the true distribution may assign to each event, this crate finds
//! the linear combination of the most extreme plausible candidates that
//! minimizes the worst-case Kullback-Leibler divergence from the truth. The
//! optimum is the KL centroid of the plausible candidates, computed by the
//! classical capacity iteration with a certified optimality gap.
//!
//! The [`ebayes`] module applies the machinery to large-scale testing: it
//! merges conflicting local-false-discovery-rate estimators (theoretical
//! null, empirical null, q-values) into a single hedged estimate, screened by
//! a likelihood-based plausibility bound.
//!
//! The crate is `no_std`-compatible (allocation required); file formats and
//! the command-line front end live in the companion `klmix-cli` crate.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod centroid;
pub mod combine;
pub mod dist;
pub mod ebayes;
mod error;
pub mod extreme;
mod math;
pub mod numeric;
pub mod special;
pub mod weights;

pub use crate::centroid::{
    equidistance_check, grid_oracle_weighting, induced_weighting, induced_weighting_traced,
    CentroidResult, EquidistanceReport, IterationRecord, MixtureFamily, SolverConfig,
};
pub use crate::combine::{
    combine, combine_binary, combine_independent, lex_compare, optimal_action, BinaryCombination,
    CombinationResult, Interval, LossMatrix, PlausibleBox, Utility,
};
pub use crate::dist::{
    information_gain, kl_divergence, kl_divergence_product, mixture, mixture_product,
    BernoulliProduct, DivergenceValue, FiniteDistribution,
};
pub use crate::error::{BoxViolation, Error, Result};
pub use crate::extreme::{binary_extremes, extreme_subset, ExtremeSubset, HullCertificate, PointSet};
pub use crate::weights::WeightVector;

/// Largest weight the capacity iteration can assign to any single family
/// member: `1 - 1/e`, roughly 63%.
pub const MAX_INDUCED_WEIGHT: f64 = 1.0 - 1.0 / core::f64::consts::E;
