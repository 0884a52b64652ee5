use serde::{Deserialize, Serialize};

use super::CoxeterError;
use crate::geometry::{distance, AffineSubspace, Hyperplane};
use crate::polyalg::{ExponentVector, FloatPolynomial, OrthogonalAffineMap, Polynomial};

/// Separation below which two support points are considered equal.
pub const POINT_TOL: f64 = 1e-9;

/// Relative tolerance for comparing weights on the floating-point path.
pub const WEIGHT_REL_TOL: f64 = 1e-10;

/// Weight polynomial of a point source.
///
/// Weights read from configuration are exact. Pulling an exact weight back
/// along a map with irrational entries yields an approximate one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Weight {
    Exact(Polynomial),
    Approx(ApproxPolynomial),
}

/// Serializable wrapper around a [`FloatPolynomial`].
#[derive(Clone, Debug, PartialEq)]
pub struct ApproxPolynomial(pub FloatPolynomial);

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ApproxTerm {
    exps: Vec<u32>,
    coeff: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ApproxJson {
    dimension: usize,
    terms: Vec<ApproxTerm>,
}

impl Serialize for ApproxPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ApproxJson {
            dimension: self.0.dimension(),
            terms: self
                .0
                .terms()
                .map(|(e, c)| ApproxTerm {
                    exps: e.exps().to_vec(),
                    coeff: c,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ApproxPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = ApproxJson::deserialize(d)?;
        if raw.terms.iter().any(|t| t.exps.len() != raw.dimension) {
            return Err(serde::de::Error::custom("exponent vector length mismatch"));
        }
        Ok(ApproxPolynomial(FloatPolynomial::from_terms(
            raw.dimension,
            raw.terms.into_iter().map(|t| (ExponentVector::new(t.exps), t.coeff)),
        )))
    }
}

impl Weight {
    pub fn dimension(&self) -> usize {
        match self {
            Weight::Exact(p) => p.dimension(),
            Weight::Approx(p) => p.0.dimension(),
        }
    }

    pub fn to_float(&self) -> FloatPolynomial {
        match self {
            Weight::Exact(p) => p.to_float(),
            Weight::Approx(p) => p.0.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Weight::Exact(p) => p.is_zero(),
            Weight::Approx(p) => p.0.max_abs_coefficient() == 0.0,
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            Weight::Exact(p) => p.degree().unwrap_or(0),
            Weight::Approx(p) => p.0.degree().unwrap_or(0),
        }
    }

    pub fn neg(&self) -> Weight {
        match self {
            Weight::Exact(p) => Weight::Exact(-p),
            Weight::Approx(p) => Weight::Approx(ApproxPolynomial(p.0.scale(-1.0))),
        }
    }

    /// `ξ ↦ G(A ξ)` for the linear part `A` of `map`.
    pub fn compose_linear(&self, map: &OrthogonalAffineMap) -> Weight {
        match (self, map.exact_matrix()) {
            (Weight::Exact(p), Some(matrix)) => {
                let zero = vec![crate::Rational::from_integer(0.into()); p.dimension()];
                Weight::Exact(p.substitute_affine(matrix, &zero))
            }
            _ => Weight::Approx(ApproxPolynomial(self.to_float().compose_linear(&map.float_matrix()))),
        }
    }

    /// Exact equality when both sides are exact, relative comparison
    /// otherwise.
    pub fn approx_eq(&self, other: &Weight) -> bool {
        match (self, other) {
            (Weight::Exact(a), Weight::Exact(b)) => a == b,
            _ => self.to_float().approx_eq(&other.to_float(), WEIGHT_REL_TOL),
        }
    }
}

impl From<Polynomial> for Weight {
    fn from(p: Polynomial) -> Self {
        Weight::Exact(p)
    }
}

/// A point source `G(∂)δ_y`, acting on test functions by `φ ↦ (G(∂)φ)(y)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Source {
    pub point: Vec<f64>,
    pub weight: Weight,
}

impl Source {
    pub fn new(point: Vec<f64>, weight: impl Into<Weight>) -> Self {
        Source {
            point,
            weight: weight.into(),
        }
    }

    /// Point mass `c·δ_y`.
    pub fn point_mass(point: Vec<f64>, c: i64) -> Self {
        let n = point.len();
        Source::new(point, Polynomial::constant(n, crate::Rational::from_integer(c.into())))
    }
}

/// A distribution supported on finitely many points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiniteDistribution {
    dimension: usize,
    sources: Vec<Source>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DistributionJson {
    dimension: usize,
    sources: Vec<Source>,
}

impl<'de> Deserialize<'de> for FiniteDistribution {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = DistributionJson::deserialize(d)?;
        FiniteDistribution::new(raw.dimension, raw.sources).map_err(serde::de::Error::custom)
    }
}

impl FiniteDistribution {
    /// Validates dimensions, pairwise distinct points and that at least one
    /// weight is nonzero.
    pub fn new(dimension: usize, sources: Vec<Source>) -> Result<Self, CoxeterError> {
        for s in &sources {
            if s.point.len() != dimension || s.weight.dimension() != dimension {
                return Err(CoxeterError::DimensionMismatch {
                    expected: dimension,
                    found: if s.point.len() != dimension {
                        s.point.len()
                    } else {
                        s.weight.dimension()
                    },
                });
            }
            if s.point.iter().any(|v| !v.is_finite()) {
                return Err(CoxeterError::InvalidDistribution("non-finite source point".into()));
            }
        }
        for (i, a) in sources.iter().enumerate() {
            for b in &sources[i + 1..] {
                if distance(&a.point, &b.point) <= POINT_TOL {
                    return Err(CoxeterError::InvalidDistribution(format!(
                        "source points {:?} and {:?} coincide",
                        a.point, b.point
                    )));
                }
            }
        }
        if sources.iter().all(|s| s.weight.is_zero()) {
            return Err(CoxeterError::InvalidDistribution("all weights vanish".into()));
        }
        Ok(FiniteDistribution { dimension, sources })
    }

    /// `G(∂)δ_y`.
    pub fn single(point: Vec<f64>, weight: Polynomial) -> Result<Self, CoxeterError> {
        let n = point.len();
        FiniteDistribution::new(n, vec![Source::new(point, weight)])
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn sources(&self) -> &[Source] {
        &self.sources
    }

    /// Sources with a nonzero weight.
    pub fn support(&self) -> impl Iterator<Item = &Source> {
        self.sources.iter().filter(|s| !s.weight.is_zero())
    }

    pub fn support_points(&self) -> Vec<Vec<f64>> {
        self.support().map(|s| s.point.clone()).collect()
    }

    /// Largest distance between two support points.
    pub fn diameter(&self) -> f64 {
        let pts = self.support_points();
        let mut d: f64 = 0.0;
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                d = d.max(distance(a, b));
            }
        }
        d
    }

    pub fn max_weight_degree(&self) -> u32 {
        self.sources.iter().map(|s| s.weight.degree()).max().unwrap_or(0)
    }

    pub fn neg(&self) -> FiniteDistribution {
        FiniteDistribution {
            dimension: self.dimension,
            sources: self
                .sources
                .iter()
                .map(|s| Source {
                    point: s.point.clone(),
                    weight: s.weight.neg(),
                })
                .collect(),
        }
    }

    /// Same support with matching weights (points within [`POINT_TOL`]).
    pub fn approx_eq(&self, other: &FiniteDistribution) -> bool {
        let mine: Vec<&Source> = self.support().collect();
        let theirs: Vec<&Source> = other.support().collect();
        mine.len() == theirs.len()
            && mine.iter().all(|a| {
                theirs.iter().any(|b| {
                    distance(&a.point, &b.point) <= POINT_TOL * scale(&a.point) && a.weight.approx_eq(&b.weight)
                })
            })
    }
}

fn scale(p: &[f64]) -> f64 {
    p.iter().fold(1.0f64, |m, v| m.max(v.abs()))
}

/// Pullback `f∘σ`: the source `(y, G)` moves to `(σ⁻¹(y), G∘A)`, where `A`
/// is the linear part of `σ`, so that `⟨f∘σ, φ⟩ = ⟨f, φ∘σ⁻¹⟩`.
pub fn pullback(f: &FiniteDistribution, sigma: &OrthogonalAffineMap) -> Result<FiniteDistribution, CoxeterError> {
    if sigma.dimension() != f.dimension {
        return Err(CoxeterError::DimensionMismatch {
            expected: f.dimension,
            found: sigma.dimension(),
        });
    }
    let inv = sigma.inverse();
    let sources = f
        .sources
        .iter()
        .map(|s| Source {
            point: inv.apply(&s.point),
            weight: s.weight.compose_linear(sigma),
        })
        .collect();
    Ok(FiniteDistribution {
        dimension: f.dimension,
        sources,
    })
}

/// `f∘σ_H = −f` for the reflection `σ_H` across `H`.
pub fn is_odd(f: &FiniteDistribution, h: &Hyperplane) -> bool {
    let sigma = OrthogonalAffineMap::reflection(h.normal(), h.offset());
    match pullback(f, &sigma) {
        Ok(g) => g.approx_eq(&f.neg()),
        Err(_) => false,
    }
}

/// The support is invariant under reflection across `H`.
pub fn mirror_support_check(f: &FiniteDistribution, h: &Hyperplane) -> bool {
    let pts = f.support_points();
    pts.iter().all(|y| {
        let m = super::mirror_point(y, h);
        pts.iter().any(|z| distance(&m, z) <= POINT_TOL * scale(y))
    })
}

/// Affine hull `L` of the support.
pub fn span_support(f: &FiniteDistribution) -> AffineSubspace {
    AffineSubspace::hull(&f.support_points(), 1e-10)
}

/// Candidate mirrors: perpendicular bisectors of support pairs that map the
/// support to itself, plus hyperplanes containing `L = span(supp f)` whose
/// normals are linear factors of a weight.
pub fn candidate_mirrors(f: &FiniteDistribution) -> Vec<Hyperplane> {
    let pts = f.support_points();
    let mut out: Vec<Hyperplane> = Vec::new();
    let push = |h: Hyperplane, out: &mut Vec<Hyperplane>| {
        if !out.iter().any(|g| g.approx_eq(&h, crate::geometry::HYPERPLANE_TOL)) {
            out.push(h);
        }
    };
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            let normal: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
            let mid: Vec<f64> = a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect();
            if let Ok(h) = Hyperplane::through(&mid, &normal) {
                if mirror_support_check(f, &h) {
                    push(h, &mut out);
                }
            }
        }
    }
    let edge = span_support(f);
    let origin = vec![0.0; f.dimension];
    for s in f.support() {
        let Weight::Exact(w) = &s.weight else { continue };
        if w.is_constant() {
            continue;
        }
        for factor in crate::stationary::extract_hyperplanes(w, &origin, &[]) {
            if factor.offset().abs() > crate::geometry::HYPERPLANE_TOL {
                continue;
            }
            if let Ok(h) = Hyperplane::through(&s.point, factor.normal()) {
                if edge.lies_in(&h, 1e-9) {
                    push(h, &mut out);
                }
            }
        }
    }
    out
}
