//! Exact computation of counting quasi-polynomials: Ehrhart functions of
//! rational polytopes and weighted simplices, dimension growth of staircase
//! complements in `N^m`, and size measures of linear difference systems
//! under weighted translations.
//!
//! All arithmetic is exact over arbitrary-precision rationals. Counting
//! loops run data-parallel by default; build with
//! `--no-default-features` to compare against the sequential fallback.

pub mod ehrhart;
pub mod error;
pub mod exactnum;
pub mod kolchin;
pub mod latcount;
pub mod quasipoly;
pub mod sigma;

mod par;

pub use error::Error;
pub use exactnum::{parse_rational, BigInt, PeriodicRational, Rational};
pub use quasipoly::QuasiPolynomial;

pub use latcount::{
    count_polytope, count_simplex, count_va, count_va_recursive, ord_w, HPolytope, WeightVector,
    DEFAULT_ENUMERATION_CAP,
};

pub use ehrhart::{
    ehrhart_polytope, lambda_w, vertices, volume, VertexSet, MAX_POLYTOPE_DIMENSION,
};

pub use kolchin::{
    dimension_quasipoly, dimension_single_point, exact_count_eval, minimal_antichain,
    DimensionResult, PointSet, MAX_ANTICHAIN_FOR_EXPANSION,
};

pub use sigma::{
    characteristic_set, dimension_quasipoly_system, reduce, sigma_trdeg, CharacteristicSet,
    LinearSigmaPolynomial, PolynomialInput, Ranking, SystemDimension, SystemInput, SystemSpec,
    Term, TermInput,
};
