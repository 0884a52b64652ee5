//! Reflection geometry for finitely supported distributions.
//!
//! A hyperplane `H` across which `f` is odd (`f∘σ_H = −f`) is stationary for
//! `f`. Such mirrors must map the support to itself, so the perpendicular
//! bisectors of support pairs are the natural candidates. Mirrors generate a
//! reflection group; [`closure`] decides at desk scale whether that group is
//! finite.

mod closure;
mod distribution;

pub use crate::geometry::Hyperplane;
pub use closure::{
    closure, common_point, mirror_point, reflect_hyperplane, ClosureStatus, CoxeterClosureResult, DEFAULT_MAX_PLANES,
};
pub use distribution::{
    candidate_mirrors, is_odd, mirror_support_check, pullback, span_support, ApproxPolynomial, FiniteDistribution,
    Source, Weight, POINT_TOL, WEIGHT_REL_TOL,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoxeterError {
    #[error("closure needs at least one hyperplane")]
    EmptyInput,
    #[error("max_planes = {bound} is below the {initial} distinct initial hyperplanes")]
    BoundTooSmall { bound: usize, initial: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
}
