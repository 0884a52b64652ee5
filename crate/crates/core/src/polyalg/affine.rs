use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::PolyError;
use crate::Rational;

const FLOAT_ORTHOGONALITY_TOL: f64 = 1e-12;

/// An orthogonal affine map `x ↦ A x + b`.
///
/// The exact variant carries rational entries and composes with polynomials
/// without rounding; the float variant covers rotations and reflections
/// with irrational entries.
#[derive(Clone, Debug, PartialEq)]
pub enum OrthogonalAffineMap {
    Exact {
        matrix: Vec<Vec<Rational>>,
        translation: Vec<Rational>,
    },
    Float {
        matrix: Vec<Vec<f64>>,
        translation: Vec<f64>,
    },
}

fn check_square<T>(matrix: &[Vec<T>], translation_len: usize) -> Result<usize, PolyError> {
    let n = matrix.len();
    if n == 0 || matrix.iter().any(|r| r.len() != n) || translation_len != n {
        return Err(PolyError::NotOrthogonal("matrix must be square and match the translation".into()));
    }
    Ok(n)
}

impl OrthogonalAffineMap {
    pub fn exact(matrix: Vec<Vec<Rational>>, translation: Vec<Rational>) -> Result<Self, PolyError> {
        let n = check_square(&matrix, translation.len())?;
        for i in 0..n {
            for j in 0..n {
                let dot: Rational = (0..n).map(|k| &matrix[k][i] * &matrix[k][j]).sum();
                let expected = if i == j { Rational::one() } else { Rational::zero() };
                if dot != expected {
                    return Err(PolyError::NotOrthogonal(format!("column product ({i},{j}) = {dot}")));
                }
            }
        }
        Ok(OrthogonalAffineMap::Exact { matrix, translation })
    }

    pub fn float(matrix: Vec<Vec<f64>>, translation: Vec<f64>) -> Result<Self, PolyError> {
        let n = check_square(&matrix, translation.len())?;
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = (0..n).map(|k| matrix[k][i] * matrix[k][j]).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                if (dot - expected).abs() > FLOAT_ORTHOGONALITY_TOL {
                    return Err(PolyError::NotOrthogonal(format!("column product ({i},{j}) = {dot}")));
                }
            }
        }
        Ok(OrthogonalAffineMap::Float { matrix, translation })
    }

    pub fn identity(dimension: usize) -> Self {
        let matrix = (0..dimension)
            .map(|i| {
                (0..dimension)
                    .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        OrthogonalAffineMap::Exact {
            matrix,
            translation: vec![Rational::zero(); dimension],
        }
    }

    /// Exchanges coordinates `i` and `j`.
    pub fn swap(dimension: usize, i: usize, j: usize) -> Self {
        let mut map = Self::identity(dimension);
        if let OrthogonalAffineMap::Exact { matrix, .. } = &mut map {
            matrix.swap(i, j);
        }
        map
    }

    /// Reflection across `{x : normal·x = offset}` with an exact unit normal.
    pub fn exact_reflection(normal: &[Rational], offset: &Rational) -> Result<Self, PolyError> {
        let n = normal.len();
        let norm2: Rational = normal.iter().map(|v| v * v).sum();
        if !norm2.is_one() {
            return Err(PolyError::NotOrthogonal(format!("normal has squared length {norm2}")));
        }
        let two = Rational::from_integer(2.into());
        let matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let delta = if i == j { Rational::one() } else { Rational::zero() };
                        delta - &two * &normal[i] * &normal[j]
                    })
                    .collect()
            })
            .collect();
        let translation = normal.iter().map(|v| &two * offset * v).collect();
        Ok(OrthogonalAffineMap::Exact { matrix, translation })
    }

    /// Reflection across `{x : normal·x = offset}`; exact whenever the unit
    /// normal and offset are recognisably rational, float otherwise.
    pub fn reflection(normal: &[f64], offset: f64) -> Self {
        let exact_normal: Option<Vec<Rational>> = normal.iter().map(|&v| rationalize(v)).collect();
        if let (Some(en), Some(eo)) = (exact_normal, rationalize(offset)) {
            if let Ok(map) = Self::exact_reflection(&en, &eo) {
                return map;
            }
        }
        let n = normal.len();
        let matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { 1.0 } else { 0.0 } - 2.0 * normal[i] * normal[j])
                    .collect()
            })
            .collect();
        let translation = normal.iter().map(|v| 2.0 * offset * v).collect();
        OrthogonalAffineMap::Float { matrix, translation }
    }

    pub fn dimension(&self) -> usize {
        match self {
            OrthogonalAffineMap::Exact { translation, .. } => translation.len(),
            OrthogonalAffineMap::Float { translation, .. } => translation.len(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, OrthogonalAffineMap::Exact { .. })
    }

    pub fn exact_matrix(&self) -> Option<&Vec<Vec<Rational>>> {
        match self {
            OrthogonalAffineMap::Exact { matrix, .. } => Some(matrix),
            OrthogonalAffineMap::Float { .. } => None,
        }
    }

    pub(crate) fn exact_translation(&self) -> Vec<Rational> {
        match self {
            OrthogonalAffineMap::Exact { translation, .. } => translation.clone(),
            OrthogonalAffineMap::Float { translation, .. } => translation
                .iter()
                .map(|&v| Rational::from_float(v).unwrap_or_else(Rational::zero))
                .collect(),
        }
    }

    pub fn float_matrix(&self) -> Vec<Vec<f64>> {
        match self {
            OrthogonalAffineMap::Exact { matrix, .. } => matrix
                .iter()
                .map(|r| r.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect())
                .collect(),
            OrthogonalAffineMap::Float { matrix, .. } => matrix.clone(),
        }
    }

    pub fn float_translation(&self) -> Vec<f64> {
        match self {
            OrthogonalAffineMap::Exact { translation, .. } => {
                translation.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect()
            }
            OrthogonalAffineMap::Float { translation, .. } => translation.clone(),
        }
    }

    /// Image of a point.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let m = self.float_matrix();
        let b = self.float_translation();
        m.iter()
            .zip(&b)
            .map(|(row, bi)| row.iter().zip(x).map(|(a, xi)| a * xi).sum::<f64>() + bi)
            .collect()
    }

    /// `x ↦ Aᵀ (x − b)`.
    pub fn inverse(&self) -> Self {
        match self {
            OrthogonalAffineMap::Exact { matrix, translation } => {
                let n = translation.len();
                let mt: Vec<Vec<Rational>> =
                    (0..n).map(|i| (0..n).map(|j| matrix[j][i].clone()).collect()).collect();
                let t = mt
                    .iter()
                    .map(|row| -row.iter().zip(translation).map(|(a, b)| a * b).sum::<Rational>())
                    .collect();
                OrthogonalAffineMap::Exact { matrix: mt, translation: t }
            }
            OrthogonalAffineMap::Float { matrix, translation } => {
                let n = translation.len();
                let mt: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| matrix[j][i]).collect()).collect();
                let t = mt
                    .iter()
                    .map(|row| -row.iter().zip(translation).map(|(a, b)| a * b).sum::<f64>())
                    .collect();
                OrthogonalAffineMap::Float { matrix: mt, translation: t }
            }
        }
    }

    /// The composite `x ↦ self(inner(x))`.
    pub fn after(&self, inner: &OrthogonalAffineMap) -> OrthogonalAffineMap {
        match (self, inner) {
            (
                OrthogonalAffineMap::Exact { matrix: a, translation: b },
                OrthogonalAffineMap::Exact { matrix: c, translation: d },
            ) => {
                let n = b.len();
                let m = (0..n)
                    .map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &c[k][j]).sum()).collect())
                    .collect();
                let t = (0..n)
                    .map(|i| (0..n).map(|k| &a[i][k] * &d[k]).sum::<Rational>() + &b[i])
                    .collect();
                OrthogonalAffineMap::Exact { matrix: m, translation: t }
            }
            _ => {
                let (a, b) = (self.float_matrix(), self.float_translation());
                let (c, d) = (inner.float_matrix(), inner.float_translation());
                let n = b.len();
                let m = (0..n)
                    .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * c[k][j]).sum()).collect())
                    .collect();
                let t = (0..n)
                    .map(|i| (0..n).map(|k| a[i][k] * d[k]).sum::<f64>() + b[i])
                    .collect();
                OrthogonalAffineMap::Float { matrix: m, translation: t }
            }
        }
    }
}

/// Recovers a rational with denominator at most 10⁶ that matches `x` to
/// within 1e−13 relative, by continued-fraction expansion.
pub fn rationalize(x: f64) -> Option<Rational> {
    const MAX_DEN: i64 = 1_000_000;
    if !x.is_finite() {
        return None;
    }
    if x == 0.0 {
        return Some(Rational::zero());
    }
    let tol = 1e-13 * x.abs().max(1.0);
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x.abs();
    for _ in 0..64 {
        let a = r.floor();
        if a > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > MAX_DEN as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if ((h1 as f64 / k1 as f64) - x.abs()).abs() <= tol {
            let q = Rational::new(BigInt::from(h1), BigInt::from(k1));
            return Some(if x < 0.0 { -q } else { q });
        }
        let frac = r - a;
        if frac <= 0.0 {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

/// Rounds a rational to the nearest double, keeping the sign of tiny values.
pub(crate) fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(if q.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}
