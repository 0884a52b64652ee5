//! Hyperplanes and affine subspaces of ℝⁿ in floating point.

use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::polyalg::{rationalize, ExponentVector, FloatPolynomial, Polynomial};
use crate::Rational;

/// Tolerance for comparing canonicalized hyperplanes.
pub const HYPERPLANE_TOL: f64 = 1e-9;

const SIGN_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("hyperplane normal must be nonzero and finite")]
    DegenerateNormal,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    norm(&sub(a, b))
}

/// The hyperplane `{x : normal·x = offset}` with a unit normal whose first
/// non-negligible component is positive.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Hyperplane {
    normal: Vec<f64>,
    offset: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HyperplaneJson {
    normal: Vec<f64>,
    offset: f64,
}

impl<'de> Deserialize<'de> for Hyperplane {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = HyperplaneJson::deserialize(deserializer)?;
        Hyperplane::new(raw.normal, raw.offset).map_err(serde::de::Error::custom)
    }
}

impl Hyperplane {
    /// Normalizes and canonicalizes `{x : normal·x = offset}`.
    pub fn new(normal: Vec<f64>, offset: f64) -> Result<Self, GeometryError> {
        let len = norm(&normal);
        if !(len.is_finite() && len > 0.0) || !offset.is_finite() {
            return Err(GeometryError::DegenerateNormal);
        }
        let mut normal: Vec<f64> = normal.iter().map(|v| v / len).collect();
        let mut offset = offset / len;
        let first = normal.iter().find(|v| v.abs() > SIGN_TOL).copied().unwrap_or(1.0);
        if first < 0.0 {
            normal.iter_mut().for_each(|v| *v = -*v);
            offset = -offset;
        }
        for v in normal.iter_mut() {
            if *v == 0.0 {
                *v = 0.0; // drop negative zero
            }
        }
        if offset == 0.0 {
            offset = 0.0;
        }
        Ok(Hyperplane { normal, offset })
    }

    /// The hyperplane through `point` with the given normal.
    pub fn through(point: &[f64], normal: &[f64]) -> Result<Self, GeometryError> {
        if point.len() != normal.len() {
            return Err(GeometryError::DimensionMismatch {
                expected: normal.len(),
                found: point.len(),
            });
        }
        Hyperplane::new(normal.to_vec(), dot(normal, point))
    }

    /// Coordinate hyperplane `{x_axis = value}`.
    pub fn coordinate(dimension: usize, axis: usize, value: f64) -> Self {
        let mut normal = vec![0.0; dimension];
        normal[axis] = 1.0;
        Hyperplane { normal, offset: value }
    }

    pub fn normal(&self) -> &[f64] {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn dimension(&self) -> usize {
        self.normal.len()
    }

    /// `normal·x − offset`.
    pub fn signed_distance(&self, x: &[f64]) -> f64 {
        dot(&self.normal, x) - self.offset
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.signed_distance(x).abs() <= tol
    }

    /// Equality of the canonical forms within `tol`.
    pub fn approx_eq(&self, other: &Hyperplane, tol: f64) -> bool {
        self.normal.len() == other.normal.len()
            && (self.offset - other.offset).abs() <= tol
            && self.normal.iter().zip(&other.normal).all(|(a, b)| (a - b).abs() <= tol)
    }

    /// A point on the hyperplane.
    pub fn point(&self) -> Vec<f64> {
        self.normal.iter().map(|v| v * self.offset).collect()
    }

    /// Orthonormal basis of the directions parallel to the hyperplane.
    pub fn tangent_basis(&self) -> Vec<Vec<f64>> {
        let n = self.dimension();
        let mut basis: Vec<Vec<f64>> = vec![self.normal.clone()];
        for axis in 0..n {
            let mut v = vec![0.0; n];
            v[axis] = 1.0;
            for b in &basis {
                let c = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(vi, bi)| *vi -= c * bi);
            }
            let len = norm(&v);
            if len > 1e-8 {
                basis.push(v.iter().map(|x| x / len).collect());
            }
            if basis.len() == n {
                break;
            }
        }
        basis.remove(0);
        basis
    }

    /// The exact linear form `a·x − c` when the normal is a rational multiple
    /// of an integer vector and the offset is rational at the same scale.
    pub fn exact_linear_form(&self) -> Option<Polynomial> {
        let n = self.dimension();
        // Scale so the largest normal component is one, which turns normals
        // like (1/√5)(1, 2) into rational vectors.
        let vmax = self
            .normal
            .iter()
            .fold(0.0f64, |acc, &v| if v.abs() > acc.abs() { v } else { acc });
        let coeffs: Option<Vec<Rational>> = self.normal.iter().map(|v| rationalize(v / vmax)).collect();
        let coeffs = coeffs?;
        let c = rationalize(self.offset / vmax)?;
        let mut terms: Vec<(ExponentVector, Rational)> = coeffs
            .into_iter()
            .enumerate()
            .map(|(i, a)| (ExponentVector::unit(n, i), a))
            .collect();
        terms.push((ExponentVector::zero(n), -c));
        Polynomial::from_terms(n, terms).ok()
    }

    /// `normal·x − offset` as a float polynomial.
    pub fn linear_form(&self) -> FloatPolynomial {
        let n = self.dimension();
        let mut terms: Vec<(ExponentVector, f64)> = self
            .normal
            .iter()
            .enumerate()
            .map(|(i, &a)| (ExponentVector::unit(n, i), a))
            .collect();
        terms.push((ExponentVector::zero(n), -self.offset));
        FloatPolynomial::from_terms(n, terms)
    }
}

/// Affine subspace `basepoint + span(basis)` with an orthonormal basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineSubspace {
    pub basepoint: Vec<f64>,
    pub basis: Vec<Vec<f64>>,
}

impl AffineSubspace {
    pub fn point(p: &[f64]) -> Self {
        AffineSubspace {
            basepoint: p.to_vec(),
            basis: Vec::new(),
        }
    }

    /// Affine hull of a nonempty point set by Gram–Schmidt on the differences
    /// to the first point; directions with residual norm below `pivot_tol`
    /// (relative to the point spread) are dropped.
    pub fn hull(points: &[Vec<f64>], pivot_tol: f64) -> Self {
        let base = points[0].clone();
        let scale = points
            .iter()
            .map(|p| distance(p, &base))
            .fold(1.0f64, f64::max);
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for p in &points[1..] {
            let mut v = sub(p, &base);
            // Two passes of orthogonalization for stability.
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(&v, b);
                    v.iter_mut().zip(b).for_each(|(vi, bi)| *vi -= c * bi);
                }
            }
            let len = norm(&v);
            if len > pivot_tol * scale {
                basis.push(v.iter().map(|x| x / len).collect());
            }
        }
        AffineSubspace { basepoint: base, basis }
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dimension(&self) -> usize {
        self.basepoint.len()
    }

    /// Euclidean distance from `x`.
    pub fn distance(&self, x: &[f64]) -> f64 {
        let mut v = sub(x, &self.basepoint);
        for b in &self.basis {
            let c = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(vi, bi)| *vi -= c * bi);
        }
        norm(&v)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.distance(x) <= tol
    }

    /// True when the subspace lies inside the hyperplane.
    pub fn lies_in(&self, h: &Hyperplane, tol: f64) -> bool {
        h.contains(&self.basepoint, tol) && self.basis.iter().all(|b| dot(b, h.normal()).abs() <= tol)
    }
}
