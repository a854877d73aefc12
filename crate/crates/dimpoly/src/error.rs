//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong across the crate.
///
/// The variants fall into three groups: input validation (bad dimensions,
/// unparsable numbers, degenerate polytopes), resource guards (enumeration
/// caps, subset explosion, unsupported dimension), and internal consistency
/// failures that indicate a hypothesis does not hold for the given input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("weight vector must be non-empty")]
    EmptyWeights,

    #[error("weights must be positive (found 0 at position {position})")]
    ZeroWeight { position: usize },

    #[error("cannot parse {input:?} as an exact rational")]
    InvalidRational { input: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("polytope is unbounded")]
    UnboundedPolytope,

    #[error("polytope is empty")]
    EmptyPolytope,

    #[error("enumeration needs {required} lattice points, over the cap of {cap}")]
    EnumerationCapExceeded { required: u128, cap: u64 },

    #[error("antichain of {size} points needs 2^{size} subset terms, over the {max}-point guard")]
    SubsetExplosion { size: usize, max: usize },

    #[error("polytope dimension {dimension} exceeds the supported maximum {max}")]
    UnsupportedDimension { dimension: usize, max: usize },

    #[error("period/degree hypothesis violated at argument {argument}: interpolant gives {interpolant}, counting function gives {counted}")]
    HypothesisViolated {
        argument: i64,
        interpolant: String,
        counted: String,
    },

    #[error("interpolation system is singular")]
    SingularSystem,

    #[error("the zero polynomial has no leader")]
    ZeroPolynomial,

    #[error("coefficient of t^{degree} is not constant; transcendence degree undefined")]
    NonConstantLeadingCoefficient { degree: usize },

    #[error("t^{degree} coefficient {value} does not yield a non-negative integer transcendence degree")]
    NonIntegerTranscendenceDegree { degree: usize, value: String },
}

impl Error {
    /// True for errors raised by desk-scale resource guards rather than by
    /// invalid input; command-line callers map these to a distinct exit code.
    pub fn is_resource_guard(&self) -> bool {
        matches!(
            self,
            Error::EnumerationCapExceeded { .. }
                | Error::SubsetExplosion { .. }
                | Error::UnsupportedDimension { .. }
        )
    }
}
