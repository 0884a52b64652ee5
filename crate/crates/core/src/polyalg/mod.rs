//! Exact sparse multivariate polynomials over ℚ.
//!
//! Everything else in the crate is phrased in terms of [`Polynomial`]: weight
//! polynomials of point sources, their iterated Laplacians, harmonic
//! components and the linear forms of mirror hyperplanes.

mod affine;
mod float;
mod json;
mod monomial;
mod parse;
mod polynomial;

pub use affine::{rationalize, OrthogonalAffineMap};
pub(crate) use affine::to_f64 as rational_to_f64;
pub use float::FloatPolynomial;
pub use json::{rational_from_str, rational_to_string};
pub use monomial::{monomials_of_degree, monomials_up_to, variable_names, ExponentVector};
pub use polynomial::{arith, ArithOp, Division, Polynomial};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("map is not orthogonal: {0}")]
    NotOrthogonal(String),
    #[error("exact composition requires a map with rational entries")]
    InexactMap,
    #[error("parse error: {0}")]
    Parse(String),
}
