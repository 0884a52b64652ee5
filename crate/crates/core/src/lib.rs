//! Stationary sets of the wave equation `u_tt = Δu` with zero initial
//! displacement and finitely supported initial velocity.
//!
//! A point `x` is stationary when `u(x, t) = 0` for every `t > 0`. For a
//! finitely supported velocity `f = Σ_i G_i(∂)δ_{y_i}` this happens exactly
//! when every spherical mean of (a mollification of) `f` centred at `x`
//! vanishes. The crate approaches the question from two independent sides:
//!
//! * **symbolically** ([`polyalg`], [`harmonic`], [`stationary`]): for a
//!   single homogeneous source the stationary set is the common zero set of
//!   the iterated Laplacians of its weight, and hyperplanes of odd symmetry
//!   ([`coxeter`]) are stationary for multi-point sources;
//! * **numerically** ([`oracle`]): mollified spherical means and explicit
//!   Kirchhoff/Poisson solutions evaluated with high-order quadrature.
//!
//! [`oracle::verify_prediction`] binds the two together.
//!
//! ```
//! use nodalcone::polyalg::Polynomial;
//! use nodalcone::stationary::predict_single_point;
//!
//! let g = Polynomial::parse(2, "x^2*y").unwrap();
//! let pred = predict_single_point(&g, &[0.0, 0.0]).unwrap();
//! // x²y and Δ(x²y) = 2y vanish together only on the x-axis.
//! assert!(pred.contains(&[3.0, 0.0], 0.0).unwrap());
//! assert!(!pred.contains(&[0.0, 1.0], 0.0).unwrap());
//! ```

pub mod config;
pub mod coxeter;
pub mod geometry;
pub mod harmonic;
mod linalg;
pub mod oracle;
pub mod polyalg;
pub mod stationary;

/// Arbitrary-precision rational number used for every exact coefficient.
pub type Rational = num_rational::BigRational;

// The guide under `book/` is compiled as doctests so its snippets stay in
// sync with the API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/harmonic.md")]
    mod harmonic {}
    #[doc = include_str!("../../../book/src/stationary.md")]
    mod stationary {}
    #[doc = include_str!("../../../book/src/coxeter.md")]
    mod coxeter {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
