use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::monomial::{monomials_up_to, ExponentVector};
use super::{FloatPolynomial, PolyError};
use crate::{linalg, Rational};

/// Exact sparse multivariate polynomial with rational coefficients.
///
/// The zero polynomial has no terms, and no stored coefficient is ever zero.
/// Values are immutable: every operation returns a fresh polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    dimension: usize,
    terms: BTreeMap<ExponentVector, Rational>,
}

/// Binary operation selector for [`arith`].
#[derive(Clone, Debug)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    /// Multiply the first operand by a scalar; the second operand only
    /// participates in the dimension check.
    Scale(Rational),
}

/// Outcome of an exact divisibility test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Division {
    Quotient(Polynomial),
    NotDivisible,
}

impl Division {
    pub fn quotient(&self) -> Option<&Polynomial> {
        match self {
            Division::Quotient(q) => Some(q),
            Division::NotDivisible => None,
        }
    }

    pub fn is_divisible(&self) -> bool {
        matches!(self, Division::Quotient(_))
    }
}

/// Dimension-checked arithmetic.
pub fn arith(p: &Polynomial, q: &Polynomial, op: ArithOp) -> Result<Polynomial, PolyError> {
    p.check_dimension(q.dimension)?;
    Ok(match op {
        ArithOp::Add => p + q,
        ArithOp::Sub => p - q,
        ArithOp::Mul => p * q,
        ArithOp::Scale(c) => p.scale(&c),
    })
}

impl Polynomial {
    pub fn zero(dimension: usize) -> Self {
        Polynomial {
            dimension,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dimension: usize) -> Self {
        Self::constant(dimension, Rational::one())
    }

    pub fn constant(dimension: usize, c: Rational) -> Self {
        Self::monomial(ExponentVector::zero(dimension), c)
    }

    /// The coordinate function `x_{var+1}`.
    pub fn var(dimension: usize, var: usize) -> Self {
        assert!(var < dimension, "variable index out of range");
        Self::monomial(ExponentVector::unit(dimension, var), Rational::one())
    }

    pub fn monomial(exps: ExponentVector, c: Rational) -> Self {
        let dimension = exps.dimension();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Polynomial { dimension, terms }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// repeated monomials and dropping zeros.
    pub fn from_terms<I>(dimension: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (ExponentVector, Rational)>,
    {
        let mut out = Polynomial::zero(dimension);
        for (e, c) in terms {
            if e.dimension() != dimension {
                return Err(PolyError::DimensionMismatch {
                    expected: dimension,
                    found: e.dimension(),
                });
            }
            out.add_term(e, c);
        }
        Ok(out)
    }

    /// `|x|^2 = x1^2 + ... + xn^2`.
    pub fn norm_squared(dimension: usize) -> Self {
        let mut p = Polynomial::zero(dimension);
        for i in 0..dimension {
            p.add_term(ExponentVector::unit(dimension, i).with(i, 2), Rational::one());
        }
        p
    }

    pub(crate) fn add_term(&mut self, e: ExponentVector, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, e: &ExponentVector) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(ExponentVector::degree).max()
    }

    /// Leading term under graded-lex order.
    pub fn leading_term(&self) -> Option<(&ExponentVector, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn is_constant(&self) -> bool {
        self.degree().is_none_or(|d| d == 0)
    }

    /// True for the zero polynomial and for polynomials whose terms all share
    /// one total degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(ExponentVector::degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    /// Largest coefficient magnitude, used as the scale in tolerance tests.
    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }

    pub(crate) fn check_dimension(&self, found: usize) -> Result<(), PolyError> {
        if self.dimension == found {
            Ok(())
        } else {
            Err(PolyError::DimensionMismatch {
                expected: self.dimension,
                found,
            })
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.dimension);
        }
        Polynomial {
            dimension: self.dimension,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut out = Polynomial::one(self.dimension);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Partial derivative with respect to `x_{var+1}`.
    pub fn partial(&self, var: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.dimension);
        for (e, c) in &self.terms {
            let k = e.get(var);
            if k > 0 {
                out.add_term(e.with(var, k - 1), c * Rational::from_integer(k.into()));
            }
        }
        out
    }

    /// `Σ_i ∂²P/∂x_i²`.
    pub fn laplacian(&self) -> Polynomial {
        let mut out = Polynomial::zero(self.dimension);
        for (e, c) in &self.terms {
            for var in 0..self.dimension {
                let k = e.get(var);
                if k >= 2 {
                    let factor = Rational::from_integer((k * (k - 1)).into());
                    out.add_term(e.with(var, k - 2), c * factor);
                }
            }
        }
        out
    }

    /// `[P, ΔP, Δ²P, ..., Δ^m P]` with `Δ^m P ≠ 0` and `Δ^{m+1} P = 0`;
    /// `[0]` for the zero polynomial.
    pub fn iterated_laplacians(&self) -> Vec<Polynomial> {
        let mut chain = vec![self.clone()];
        if self.is_zero() {
            return chain;
        }
        loop {
            let next = chain.last().unwrap().laplacian();
            if next.is_zero() {
                return chain;
            }
            chain.push(next);
        }
    }

    /// `Σ_i x_i ∂P/∂x_i`, computed from the partial derivatives.
    pub fn euler_operator(&self) -> Polynomial {
        (0..self.dimension)
            .map(|i| &Polynomial::var(self.dimension, i) * &self.partial(i))
            .fold(Polynomial::zero(self.dimension), |acc, t| &acc + &t)
    }

    /// Exact evaluation at a rational point.
    pub fn evaluate(&self, x: &[Rational]) -> Result<Rational, PolyError> {
        self.check_dimension(x.len())?;
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (xi, &k) in x.iter().zip(e.exps()) {
                if k > 0 {
                    term *= num_traits::pow(xi.clone(), k as usize);
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Floating-point evaluation. Powers of each coordinate are tabulated once
    /// and terms are accumulated in graded-lex order.
    pub fn evaluate_f64(&self, x: &[f64]) -> Result<f64, PolyError> {
        self.check_dimension(x.len())?;
        Ok(self.to_float().evaluate(x))
    }

    pub fn to_float(&self) -> FloatPolynomial {
        FloatPolynomial::from_terms(
            self.dimension,
            self.terms
                .iter()
                .map(|(e, c)| (e.clone(), c.to_f64().unwrap_or(f64::NAN))),
        )
    }

    /// Homogeneous components `(degree, P_degree)` in ascending degree; empty
    /// for the zero polynomial.
    pub fn homogeneous_components(&self) -> Vec<(u32, Polynomial)> {
        let mut parts: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (e, c) in &self.terms {
            parts
                .entry(e.degree())
                .or_insert_with(|| Polynomial::zero(self.dimension))
                .terms
                .insert(e.clone(), c.clone());
        }
        parts.into_iter().collect()
    }

    /// Decides whether `self` divides `g` by solving `self · Q = g` for the
    /// coefficients of `Q` in the monomial basis of degree `deg g − deg self`.
    pub fn divides(&self, g: &Polynomial) -> Result<Division, PolyError> {
        self.check_dimension(g.dimension)?;
        if self.is_zero() {
            return Err(PolyError::ZeroDivisor);
        }
        if g.is_zero() {
            return Ok(Division::Quotient(Polynomial::zero(self.dimension)));
        }
        let (dp, dg) = (self.degree().unwrap(), g.degree().unwrap());
        if dg < dp {
            return Ok(Division::NotDivisible);
        }
        let unknowns = monomials_up_to(self.dimension, dg - dp);
        let mut row_of: BTreeMap<ExponentVector, usize> = BTreeMap::new();
        for e in g.terms.keys() {
            let next = row_of.len();
            row_of.entry(e.clone()).or_insert(next);
        }
        let mut entries: Vec<(usize, usize, Rational)> = Vec::new();
        for (col, u) in unknowns.iter().enumerate() {
            for (t, c) in &self.terms {
                let m = t.product(u);
                let next = row_of.len();
                let row = *row_of.entry(m).or_insert(next);
                entries.push((row, col, c.clone()));
            }
        }
        let mut a = vec![vec![Rational::zero(); unknowns.len()]; row_of.len()];
        for (r, c, v) in entries {
            a[r][c] += v;
        }
        let mut b = vec![Rational::zero(); row_of.len()];
        for (e, c) in &g.terms {
            b[row_of[e]] = c.clone();
        }
        Ok(match linalg::solve(&a, &b) {
            None => Division::NotDivisible,
            Some(coeffs) => Division::Quotient(Polynomial::from_terms(
                self.dimension,
                unknowns.into_iter().zip(coeffs),
            )?),
        })
    }

    /// Substitutes `x_i -> Σ_j coeffs[i][j] x_j + offsets[i]`.
    pub(crate) fn substitute_affine(&self, coeffs: &[Vec<Rational>], offsets: &[Rational]) -> Polynomial {
        let n = self.dimension;
        let images: Vec<Polynomial> = (0..n)
            .map(|i| {
                let mut p = Polynomial::constant(n, offsets[i].clone());
                for (j, a) in coeffs[i].iter().enumerate() {
                    p.add_term(ExponentVector::unit(n, j), a.clone());
                }
                p
            })
            .collect();
        let max_exp = self
            .terms
            .keys()
            .flat_map(|e| e.exps().iter().copied())
            .max()
            .unwrap_or(0) as usize;
        let powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|img| {
                let mut table = vec![Polynomial::one(n)];
                for k in 1..=max_exp {
                    let next = &table[k - 1] * img;
                    table.push(next);
                }
                table
            })
            .collect();
        let mut out = Polynomial::zero(n);
        for (e, c) in &self.terms {
            let mut term = Polynomial::constant(n, c.clone());
            for (i, &k) in e.exps().iter().enumerate() {
                if k > 0 {
                    term = &term * &powers[i][k as usize];
                }
            }
            out = &out + &term;
        }
        out
    }

    /// The polynomial `x ↦ P(A x + b)` for an exact orthogonal affine map.
    pub fn compose_affine(&self, map: &super::OrthogonalAffineMap) -> Result<Polynomial, PolyError> {
        self.check_dimension(map.dimension())?;
        let matrix = map.exact_matrix().ok_or(PolyError::InexactMap)?;
        let offsets = map.exact_translation();
        Ok(self.substitute_affine(matrix, &offsets))
    }

    /// Shifts the argument: `x ↦ P(x + shift)`.
    pub fn translate(&self, shift: &[Rational]) -> Result<Polynomial, PolyError> {
        self.check_dimension(shift.len())?;
        let n = self.dimension;
        let identity: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        Ok(self.substitute_affine(&identity, shift))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dimension, rhs.dimension, "dimension mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dimension, rhs.dimension, "dimension mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dimension, rhs.dimension, "dimension mismatch");
        let mut out = Polynomial::zero(self.dimension);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1.product(e2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            dimension: self.dimension,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl fmt::Display for Polynomial {
    /// Leading term first, e.g. `x^2*y - 3/2*z + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let magnitude = c.abs();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let constant = e.degree() == 0;
            if constant {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                write!(f, "{e}")?;
            } else {
                write!(f, "{magnitude}*{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(dim: usize, s: &str) -> Polynomial {
        Polynomial::parse(dim, s).unwrap()
    }

    #[test]
    fn additive_inverse_and_difference_of_squares() {
        let x = p(2, "x");
        assert!(arith(&x, &(-&x), ArithOp::Add).unwrap().is_zero());
        let prod = arith(&p(2, "x + y"), &p(2, "x - y"), ArithOp::Mul).unwrap();
        assert_eq!(prod, p(2, "x^2 - y^2"));
    }

    #[test]
    fn arith_rejects_dimension_mismatch() {
        let err = arith(&p(2, "x"), &p(3, "x"), ArithOp::Add).unwrap_err();
        assert!(matches!(err, PolyError::DimensionMismatch { .. }));
    }

    #[test]
    fn laplacian_examples() {
        assert_eq!(p(2, "x^2*y").laplacian(), p(2, "2*y"));
        assert!(p(2, "x*y").laplacian().is_zero());
    }

    #[test]
    fn iterated_laplacian_chains() {
        assert_eq!(p(2, "x^2*y").iterated_laplacians(), vec![p(2, "x^2*y"), p(2, "2*y")]);
        assert_eq!(p(2, "x*y").iterated_laplacians(), vec![p(2, "x*y")]);
        assert_eq!(Polynomial::zero(2).iterated_laplacians(), vec![Polynomial::zero(2)]);
    }

    #[test]
    fn evaluation() {
        let q = |n: i64| Rational::from_integer(n.into());
        assert_eq!(p(2, "x^2*y").evaluate(&[q(2), q(3)]).unwrap(), q(12));
        assert_eq!(Polynomial::zero(2).evaluate(&[q(7), q(-1)]).unwrap(), q(0));
        assert_eq!(p(2, "x^2 - y^2").evaluate(&[q(1), q(1)]).unwrap(), q(0));
        assert_eq!(p(2, "x^2*y").evaluate_f64(&[2.0, 3.0]).unwrap(), 12.0);
        assert!(p(2, "x").evaluate(&[q(1)]).is_err());
    }

    #[test]
    fn homogeneous_split() {
        let parts = p(2, "x^2 + y").homogeneous_components();
        assert_eq!(parts, vec![(1, p(2, "y")), (2, p(2, "x^2"))]);
        let h = p(3, "x*y*z - z^3");
        assert_eq!(h.homogeneous_components(), vec![(3, h.clone())]);
        assert!(Polynomial::zero(2).homogeneous_components().is_empty());
    }

    #[test]
    fn division_examples() {
        assert_eq!(p(2, "y").divides(&p(2, "x^2*y")).unwrap(), Division::Quotient(p(2, "x^2")));
        assert_eq!(
            p(2, "x - y").divides(&p(2, "x^2 - y^2")).unwrap(),
            Division::Quotient(p(2, "x + y"))
        );
        assert_eq!(p(2, "x*y").divides(&p(2, "x^2 + y^2")).unwrap(), Division::NotDivisible);
        assert!(matches!(
            Polynomial::zero(2).divides(&p(2, "x")),
            Err(PolyError::ZeroDivisor)
        ));
    }

    #[test]
    fn display_leading_first() {
        assert_eq!(p(2, "y - 3/2*x^2*y + 1").to_string(), "-3/2*x^2*y + y + 1");
        assert_eq!(Polynomial::zero(3).to_string(), "0");
    }

    #[test]
    fn translation() {
        let q = |n: i64| Rational::from_integer(n.into());
        // (x+1)^2 - y
        let t = p(2, "x^2 - y").translate(&[q(1), q(0)]).unwrap();
        assert_eq!(t, p(2, "x^2 + 2*x + 1 - y"));
    }
}
