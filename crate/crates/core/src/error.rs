//! Crate-wide error type.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// One per-event bound violated by a combining distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxViolation {
    /// Index of the combining distribution.
    pub member: usize,
    /// Index of the event whose bound is violated.
    pub event: usize,
    /// The probability the member assigns to the event.
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

impl fmt::Display for BoxViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "member {} assigns {} to event {}, outside [{}, {}]",
            self.member, self.value, self.event, self.lower, self.upper
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two objects that must share a sample space or length do not.
    DimensionMismatch { left: usize, right: usize },
    /// A probability is outside [0, 1] or not finite.
    InvalidProbability { value: f64, context: &'static str },
    /// Entries deviate from summing to one by more than the input tolerance.
    NotNormalized { sum: f64 },
    /// A finite sample space needs at least two outcomes.
    TooFewOutcomes { len: usize },
    EmptyFamily,
    EmptyActionSet,
    /// An information gain was requested with an infinite divergence input.
    InfiniteDivergence,
    /// Lexicographic utilities of different arity cannot be compared.
    ArityMismatch { left: usize, right: usize },
    /// A comparison or computation hit a NaN.
    NotComparable,
    /// No combining distribution satisfies the plausibility constraints.
    NoPlausibleMember { violations: Vec<BoxViolation> },
    /// The capacity iteration did not reach the requested gap.
    NoConvergence { iterations: usize, gap: f64 },
    /// The grid oracle only handles small families.
    FamilyTooLarge { size: usize, max: usize },
    /// Joint expansion of an independent product would be too large.
    ExpansionTooLarge { len: usize, max: usize },
    /// Truncated-likelihood fit failed to converge.
    MleFailure { grad_norm: f64 },
    /// Adaptive quadrature could not meet its tolerance.
    QuadratureFailure { attained: f64 },
    /// Genes with zero variance but nonzero mean cannot be t-tested.
    DegenerateGenes { ids: Vec<String> },
    /// Density estimation needs a minimum number of hypotheses.
    TooFewHypotheses { n: usize, min: usize },
    /// An argument is outside the mathematical domain of the operation.
    DomainError { value: f64, context: &'static str },
    /// A count or tuning parameter is invalid.
    InvalidParameter { context: &'static str },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
            Error::InvalidProbability { value, context } => {
                write!(f, "invalid probability {value} in {context}")
            }
            Error::NotNormalized { sum } => {
                write!(f, "probabilities sum to {sum}, too far from 1")
            }
            Error::TooFewOutcomes { len } => {
                write!(f, "sample space needs at least 2 outcomes, got {len}")
            }
            Error::EmptyFamily => write!(f, "empty distribution family"),
            Error::EmptyActionSet => write!(f, "empty action set"),
            Error::InfiniteDivergence => {
                write!(f, "information gain undefined for infinite divergence")
            }
            Error::ArityMismatch { left, right } => {
                write!(f, "utility arity mismatch: {left} vs {right}")
            }
            Error::NotComparable => write!(f, "comparison involves NaN"),
            Error::NoPlausibleMember { violations } => {
                write!(f, "no combining distribution is plausible")?;
                for v in violations {
                    write!(f, "; {v}")?;
                }
                Ok(())
            }
            Error::NoConvergence { iterations, gap } => {
                write!(f, "no convergence after {iterations} iterations, gap {gap}")
            }
            Error::FamilyTooLarge { size, max } => {
                write!(f, "family of {size} exceeds the supported maximum {max}")
            }
            Error::ExpansionTooLarge { len, max } => {
                write!(f, "joint expansion of {len} events exceeds the cap of {max}")
            }
            Error::MleFailure { grad_norm } => {
                write!(f, "truncated MLE did not converge, gradient norm {grad_norm}")
            }
            Error::QuadratureFailure { attained } => {
                write!(f, "quadrature tolerance not met, attained {attained}")
            }
            Error::DegenerateGenes { ids } => {
                write!(f, "zero variance with nonzero mean for genes:")?;
                for id in ids {
                    write!(f, " {id}")?;
                }
                Ok(())
            }
            Error::TooFewHypotheses { n, min } => {
                write!(f, "need at least {min} hypotheses, got {n}")
            }
            Error::DomainError { value, context } => {
                write!(f, "value {value} outside the domain of {context}")
            }
            Error::InvalidParameter { context } => write!(f, "invalid parameter: {context}"),
        }
    }
}

impl core::error::Error for Error {}
