//! Poincare polynomials of partial flag manifolds and of their genus-zero
//! stable-map moduli spaces, over exact integer arithmetic.
//!
//! Two independent computation routes are provided and cross-validated:
//!
//! * torus fixed-point enumeration: every fixed point of the maximal-torus
//!   action is listed explicitly, its deformation space is decomposed into
//!   one-dimensional weight spaces, and the Poincare polynomial is the sum
//!   of `t^(number of positive weights)` over all fixed points;
//! * closed formulas: products and exact quotients of Gaussian binomials.
//!
//! Modules:
//! * [`poly`]: dense integer polynomials and q-combinatorics,
//! * [`flags`]: flag shapes, ordered set partitions, the N statistic,
//! * [`weights`]: torus weights, signs, and signed weight multisets,
//! * [`fixedmaps`]: fixed stable maps and their deformation weights,
//! * [`poincare`]: summation, closed forms, and cross-validation reports.

pub mod fixedmaps;
pub mod flags;
pub mod poincare;
pub mod poly;
pub mod weights;

pub use fixedmaps::{DegreePattern, DegreeVector, FixedMapDescriptor, FixedPoint};
pub use flags::{FlagShape, IndexTuple};
pub use poincare::{compare, Agreement, PoincareReport};
pub use poly::IntPolynomial;
pub use weights::{Sign, Weight, WeightMultiset};

/// Errors shared by all modules.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A caller-supplied argument is outside the defined domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// Polynomial division left a nonzero remainder.
    #[error("inexact division: remainder {remainder}")]
    InexactDivision { remainder: String },
    /// The degree vector is not one of the supported patterns.
    #[error(
        "unsupported degree {given:?}: supported patterns are a single 1, \
         two 1s at distance >= 2, a single 2, two adjacent 1s, or all zeros"
    )]
    UnsupportedDegree { given: Vec<u32> },
    /// A signed multiset that must represent an actual vector space has a
    /// weight with negative multiplicity.
    #[error("non-effective representation: weight {weight} has multiplicity {multiplicity}")]
    NonEffective { weight: String, multiplicity: i64 },
    /// An internal invariant failed; indicates a bug, not bad input.
    #[error("internal consistency: {0}")]
    Inconsistency(String),
}

/// Shorthand for results carrying [`Error`].
pub type Result<T> = std::result::Result<T, Error>;
