//! Harmonic decomposition of homogeneous polynomials and harmonic divisors.
//!
//! Every homogeneous `G` of degree `k` splits uniquely as
//! `G = h_k + |x|² h_{k−2} + |x|⁴ h_{k−4} + …` with each `h_j` harmonic and
//! homogeneous of degree `j`. A harmonic `Ψ` has its zero set inside the
//! stationary set of the single source `G(∂)δ` exactly when `Ψ` divides `G`
//! and all of its iterated Laplacians.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;
use crate::polyalg::{monomials_of_degree, Division, ExponentVector, PolyError, Polynomial};
use crate::Rational;

/// Degree bound used by [`find_harmonic_multiple`] when none is given.
pub const DEFAULT_MAX_EXTRA_DEGREE: u32 = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HarmonicError {
    #[error("the zero polynomial is not admissible here")]
    ZeroPolynomial,
    #[error("polynomial is not homogeneous: it mixes degrees {degrees:?}")]
    NotHomogeneous { degrees: Vec<u32> },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `G = Σ_j |x|^{2j} h_{k−2j}` with harmonic `h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarmonicDecomposition {
    pub degree: u32,
    /// `[h_k, h_{k−2}, …]`, length `⌊k/2⌋ + 1`; zero entries are kept.
    pub components: Vec<Polynomial>,
}

impl HarmonicDecomposition {
    /// `Σ_j |x|^{2j} h_{k−2j}`.
    pub fn reconstruct(&self) -> Polynomial {
        let dim = self.components[0].dimension();
        let r2 = Polynomial::norm_squared(dim);
        let mut power = Polynomial::one(dim);
        let mut total = Polynomial::zero(dim);
        for h in &self.components {
            total = &total + &(&power * h);
            power = &power * &r2;
        }
        total
    }
}

/// Result of the bounded search for a harmonic multiple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum HarmonicMultipleWitness {
    /// A nonzero homogeneous `Q` with `Δ(P·Q) = 0`.
    Found { multiplier: Polynomial },
    /// No multiplier of degree up to the bound exists.
    NotFoundUpTo { max_degree: u32 },
}

fn require_homogeneous(p: &Polynomial) -> Result<u32, HarmonicError> {
    if p.is_zero() {
        return Err(HarmonicError::ZeroPolynomial);
    }
    let k = p.degree().unwrap();
    let euler = p.euler_operator();
    if euler != p.scale(&Rational::from_integer(k.into())) {
        let degrees = p.homogeneous_components().into_iter().map(|(d, _)| d).collect();
        return Err(HarmonicError::NotHomogeneous { degrees });
    }
    Ok(k)
}

/// Coordinates of a homogeneous polynomial in a monomial basis.
fn coordinates(p: &Polynomial, index: &BTreeMap<ExponentVector, usize>) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); index.len()];
    for (e, c) in p.terms() {
        v[index[e]] = c.clone();
    }
    v
}

fn basis_index(basis: &[ExponentVector]) -> BTreeMap<ExponentVector, usize> {
    basis.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect()
}

/// Matrix (rows: target basis) of a linear operator applied to each source
/// basis monomial.
fn operator_matrix<F>(source: &[ExponentVector], target: &[ExponentVector], dim: usize, op: F) -> Vec<Vec<Rational>>
where
    F: Fn(&Polynomial) -> Polynomial,
{
    let index = basis_index(target);
    let mut a = vec![vec![Rational::zero(); source.len()]; target.len()];
    for (col, m) in source.iter().enumerate() {
        let image = op(&Polynomial::monomial(m.clone(), Rational::one()));
        debug_assert_eq!(image.dimension(), dim);
        for (row, v) in coordinates(&image, &index).into_iter().enumerate() {
            a[row][col] = v;
        }
    }
    a
}

/// Gauss decomposition of a nonzero homogeneous polynomial.
///
/// Each step solves `Δ(|x|² R) = ΔG` exactly for the degree `k − 2`
/// remainder `R`; then `h_k = G − |x|² R` is harmonic and `R` is decomposed
/// in turn.
pub fn gauss_decompose(g: &Polynomial) -> Result<HarmonicDecomposition, HarmonicError> {
    let k = require_homogeneous(g)?;
    let dim = g.dimension();
    let r2 = Polynomial::norm_squared(dim);
    let mut components = Vec::with_capacity(k as usize / 2 + 1);
    let mut current = g.clone();
    let mut degree = k;
    loop {
        let lap = current.laplacian();
        if degree < 2 || lap.is_zero() {
            components.push(current);
            break;
        }
        let basis = monomials_of_degree(dim, degree - 2);
        let a = operator_matrix(&basis, &basis, dim, |m| (&r2 * m).laplacian());
        let b = coordinates(&lap, &basis_index(&basis));
        let coeffs = linalg::solve(&a, &b).expect("Δ(|x|²·) is invertible on homogeneous polynomials");
        let rest = Polynomial::from_terms(dim, basis.into_iter().zip(coeffs))?;
        components.push(&current - &(&r2 * &rest));
        current = rest;
        degree -= 2;
    }
    let zero = Polynomial::zero(dim);
    components.resize(k as usize / 2 + 1, zero);
    Ok(HarmonicDecomposition { degree: k, components })
}

/// Divisibility of each nonzero `Δ^s G` by `Ψ`, in chain order.
pub fn laplacian_divisibility_chain(psi: &Polynomial, g: &Polynomial) -> Result<Vec<Division>, HarmonicError> {
    if psi.is_zero() {
        return Err(HarmonicError::ZeroPolynomial);
    }
    psi.check_dimension(g.dimension())?;
    g.iterated_laplacians()
        .iter()
        .filter(|d| !d.is_zero())
        .map(|d| psi.divides(d).map_err(HarmonicError::from))
        .collect()
}

/// True iff `Ψ` divides `G, ΔG, Δ²G, …`.
pub fn divides_all_laplacians(psi: &Polynomial, g: &Polynomial) -> Result<bool, HarmonicError> {
    Ok(laplacian_divisibility_chain(psi, g)?
        .iter()
        .all(Division::is_divisible))
}

/// Searches degree by degree for a nonzero homogeneous `Q` with
/// `deg Q ≤ max_extra_degree` and `Δ(P·Q) = 0`, via the exact null space of
/// `Q ↦ Δ(PQ)`.
pub fn find_harmonic_multiple(p: &Polynomial, max_extra_degree: u32) -> Result<HarmonicMultipleWitness, HarmonicError> {
    let k = require_homogeneous(p)?;
    let dim = p.dimension();
    for d in 0..=max_extra_degree {
        let source = monomials_of_degree(dim, d);
        let total = k + d;
        let null = if total < 2 {
            // Δ kills everything of degree below two.
            let mut e = vec![Rational::zero(); source.len()];
            e[0] = Rational::one();
            vec![e]
        } else {
            let target = monomials_of_degree(dim, total - 2);
            let a = operator_matrix(&source, &target, dim, |m| (p * m).laplacian());
            linalg::nullspace(&a, source.len())
        };
        if let Some(v) = null.into_iter().next() {
            let q = Polynomial::from_terms(dim, source.into_iter().zip(v))?;
            return Ok(HarmonicMultipleWitness::Found {
                multiplier: primitive(&q),
            });
        }
    }
    Ok(HarmonicMultipleWitness::NotFoundUpTo {
        max_degree: max_extra_degree,
    })
}

/// Scales to integer coefficients with unit content and a positive leading
/// coefficient.
fn primitive(q: &Polynomial) -> Polynomial {
    let mut den = num_bigint::BigInt::one();
    let mut num = num_bigint::BigInt::zero();
    for (_, c) in q.terms() {
        den = den.lcm(c.denom());
        num = num.gcd(c.numer());
    }
    if num.is_zero() {
        return q.clone();
    }
    let mut s = Rational::new(den, num);
    if q.leading_term().is_some_and(|(_, c)| c < &Rational::zero()) {
        s = -s;
    }
    q.scale(&s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(dim: usize, s: &str) -> Polynomial {
        Polynomial::parse(dim, s).unwrap()
    }

    #[test]
    fn norm_squared_is_pure_tail() {
        for n in 2..=4 {
            let d = gauss_decompose(&Polynomial::norm_squared(n)).unwrap();
            assert!(d.components[0].is_zero());
            assert_eq!(d.components[1], Polynomial::one(n));
        }
    }

    #[test]
    fn x_squared_in_the_plane() {
        let d = gauss_decompose(&p(2, "x^2")).unwrap();
        assert_eq!(d.components, vec![p(2, "1/2*x^2 - 1/2*y^2"), p(2, "1/2")]);
    }

    #[test]
    fn harmonic_input_has_vanishing_tail() {
        let d = gauss_decompose(&p(3, "x*y*z + x^3 - 3*x*y^2")).unwrap();
        assert_eq!(d.components.len(), 2);
        assert!(d.components[1].is_zero());
    }

    #[test]
    fn rejects_mixed_degrees() {
        let err = gauss_decompose(&p(2, "x^2 + y")).unwrap_err();
        assert_eq!(err, HarmonicError::NotHomogeneous { degrees: vec![1, 2] });
        assert_eq!(gauss_decompose(&Polynomial::zero(2)).unwrap_err(), HarmonicError::ZeroPolynomial);
    }

    #[test]
    fn laplacian_divisibility() {
        let psi = p(2, "x*y");
        let g = &psi * &Polynomial::norm_squared(2);
        assert!(divides_all_laplacians(&psi, &g).unwrap());
        assert!(!divides_all_laplacians(&psi, &p(2, "x^3")).unwrap());
        assert!(divides_all_laplacians(&psi, &psi).unwrap());
        assert!(divides_all_laplacians(&Polynomial::zero(2), &psi).is_err());
    }

    #[test]
    fn harmonic_multiples() {
        assert_eq!(
            find_harmonic_multiple(&p(2, "x*y"), 0).unwrap(),
            HarmonicMultipleWitness::Found { multiplier: Polynomial::one(2) }
        );
        match find_harmonic_multiple(&p(2, "x"), 1).unwrap() {
            HarmonicMultipleWitness::Found { multiplier } => {
                assert!((&p(2, "x") * &multiplier).laplacian().is_zero());
            }
            other => panic!("expected a witness, got {other:?}"),
        }
        assert_eq!(
            find_harmonic_multiple(&Polynomial::norm_squared(2), 6).unwrap(),
            HarmonicMultipleWitness::NotFoundUpTo { max_degree: 6 }
        );
        assert!(find_harmonic_multiple(&p(2, "x + 1"), 2).is_err());
    }
}
