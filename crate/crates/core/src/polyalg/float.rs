use std::collections::BTreeMap;

use super::monomial::ExponentVector;

/// Sparse polynomial with `f64` coefficients.
///
/// Used where exact arithmetic is impossible: compositions with reflections
/// whose normals are irrational, and the numeric oracle.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatPolynomial {
    dimension: usize,
    terms: BTreeMap<ExponentVector, f64>,
}

impl FloatPolynomial {
    pub fn zero(dimension: usize) -> Self {
        FloatPolynomial {
            dimension,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(dimension: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (ExponentVector, f64)>,
    {
        let mut out = FloatPolynomial::zero(dimension);
        for (e, c) in terms {
            debug_assert_eq!(e.dimension(), dimension);
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, e: ExponentVector, c: f64) {
        if c == 0.0 {
            return;
        }
        let slot = self.terms.entry(e).or_insert(0.0);
        *slot += c;
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, f64)> {
        self.terms.iter().map(|(e, c)| (e, *c))
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(ExponentVector::degree).max()
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dimension);
        let max_exp = self
            .terms
            .keys()
            .flat_map(|e| e.exps().iter().copied())
            .max()
            .unwrap_or(0) as usize;
        let powers: Vec<Vec<f64>> = x
            .iter()
            .map(|&xi| {
                let mut t = Vec::with_capacity(max_exp + 1);
                let mut acc = 1.0;
                for _ in 0..=max_exp {
                    t.push(acc);
                    acc *= xi;
                }
                t
            })
            .collect();
        self.terms
            .iter()
            .map(|(e, c)| {
                e.exps()
                    .iter()
                    .enumerate()
                    .fold(*c, |acc, (i, &k)| acc * powers[i][k as usize])
            })
            .sum()
    }

    pub fn scale(&self, s: f64) -> FloatPolynomial {
        FloatPolynomial::from_terms(self.dimension, self.terms.iter().map(|(e, c)| (e.clone(), c * s)))
    }

    pub fn add(&self, other: &FloatPolynomial) -> FloatPolynomial {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), *c);
        }
        out
    }

    pub fn mul(&self, other: &FloatPolynomial) -> FloatPolynomial {
        let mut out = FloatPolynomial::zero(self.dimension);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.product(e2), c1 * c2);
            }
        }
        out
    }

    /// Substitutes `x_i -> Σ_j matrix[i][j] x_j + offsets[i]`, mapping into
    /// `target_dimension` variables.
    pub fn substitute_affine(&self, matrix: &[Vec<f64>], offsets: &[f64], target_dimension: usize) -> FloatPolynomial {
        let images: Vec<FloatPolynomial> = matrix
            .iter()
            .zip(offsets)
            .map(|(row, &b)| {
                let mut p = FloatPolynomial::zero(target_dimension);
                p.add_term(ExponentVector::zero(target_dimension), b);
                for (j, &a) in row.iter().enumerate() {
                    p.add_term(ExponentVector::unit(target_dimension, j), a);
                }
                p
            })
            .collect();
        let mut out = FloatPolynomial::zero(target_dimension);
        for (e, c) in &self.terms {
            let mut term = FloatPolynomial::from_terms(target_dimension, [(ExponentVector::zero(target_dimension), *c)]);
            for (i, &k) in e.exps().iter().enumerate() {
                for _ in 0..k {
                    term = term.mul(&images[i]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// `x ↦ P(M x)` for a square matrix.
    pub fn compose_linear(&self, matrix: &[Vec<f64>]) -> FloatPolynomial {
        let zeros = vec![0.0; self.dimension];
        self.substitute_affine(matrix, &zeros, self.dimension)
    }

    /// Coefficientwise comparison: every coefficient of `self - other` is at
    /// most `rel_tol` times the larger of the two coefficient norms (or
    /// `rel_tol` itself when both vanish).
    pub fn approx_eq(&self, other: &FloatPolynomial, rel_tol: f64) -> bool {
        let scale = self
            .max_abs_coefficient()
            .max(other.max_abs_coefficient())
            .max(1e-300);
        let diff = self.add(&other.scale(-1.0));
        diff.terms.values().all(|c| c.abs() <= rel_tol * scale)
    }
}
