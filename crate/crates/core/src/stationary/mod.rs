//! Symbolic predictions of stationary sets.
//!
//! For a single source `G(∂)δ_y` the stationary set is the common zero set of
//! `G, ΔG, Δ²G, …` translated to `y`. For several sources the crate predicts
//! the union of hyperplanes across which the distribution is odd; that set
//! is only claimed to lie inside the stationary set.

mod hyperplanes;
mod sampling;

pub use hyperplanes::extract_hyperplanes;
pub use sampling::{sample_zero_grid, GridBox, VarietySampler};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coxeter::{self, CoxeterError, FiniteDistribution, Weight};
use crate::geometry::{norm, sub, AffineSubspace, Hyperplane};
use crate::polyalg::{PolyError, Polynomial};
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StationaryError {
    #[error("the zero weight has no stationary set to predict")]
    ZeroWeight,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("at least one polynomial is required")]
    EmptyPolynomialList,
    #[error("grid resolution must be at least 2, got {0}")]
    InvalidResolution(usize),
    #[error("tolerance must be {0}")]
    InvalidTolerance(&'static str),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictionKind {
    /// Exact description of the stationary set of one point source.
    SinglePoint,
    /// Union of odd-symmetry mirrors; a subset of the stationary set.
    Containment,
}

/// Predicted stationary set.
///
/// For [`PredictionKind::SinglePoint`] the set is `{x : g(x − basepoint) = 0
/// for every generator g}`. For [`PredictionKind::Containment`] it is the
/// union of `hyperplanes`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationaryPrediction {
    pub kind: PredictionKind,
    pub dimension: usize,
    pub generators: Vec<Polynomial>,
    pub hyperplanes: Vec<Hyperplane>,
    pub edge: Option<AffineSubspace>,
    pub basepoint: Vec<f64>,
    pub containment_only: bool,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl StationaryPrediction {
    /// Scale-relative membership, see [`membership`].
    pub fn contains(&self, x: &[f64], tol: f64) -> Result<bool, StationaryError> {
        membership(self, x, tol)
    }

    /// True when the prediction is visibly empty: a nonzero constant among
    /// the generators, or no mirrors for a containment prediction.
    pub fn is_trivially_empty(&self) -> bool {
        match self.kind {
            PredictionKind::SinglePoint => self.generators.iter().any(|g| g.is_constant() && !g.is_zero()),
            PredictionKind::Containment => self.hyperplanes.is_empty(),
        }
    }
}

/// Stationary set of `G(∂)δ_y`: the common zeros of the nonzero iterated
/// Laplacians of `G`, with the source at `y`.
pub fn predict_single_point(g: &Polynomial, y: &[f64]) -> Result<StationaryPrediction, StationaryError> {
    if g.is_zero() {
        return Err(StationaryError::ZeroWeight);
    }
    if y.len() != g.dimension() {
        return Err(StationaryError::DimensionMismatch {
            expected: g.dimension(),
            found: y.len(),
        });
    }
    let generators: Vec<Polynomial> = g.iterated_laplacians().into_iter().filter(|p| !p.is_zero()).collect();
    let mut hyperplanes = Vec::new();
    if !g.is_constant() {
        for h in extract_hyperplanes(g, y, &[]) {
            let local = to_local(&h, y);
            if generators[1..].iter().all(|p| hyperplanes::is_linear_factor(p, &local)) {
                hyperplanes.push(h);
            }
        }
    }
    let mut notes = Vec::new();
    if !g.is_homogeneous() {
        notes.push("weight is not homogeneous; the predicted set need not be a cone".to_string());
    }
    Ok(StationaryPrediction {
        kind: PredictionKind::SinglePoint,
        dimension: g.dimension(),
        generators,
        hyperplanes,
        edge: Some(AffineSubspace::point(y)),
        basepoint: y.to_vec(),
        containment_only: false,
        notes,
    })
}

/// Prediction for an arbitrary finite distribution.
///
/// A single exact source is handled by [`predict_single_point`]. Otherwise
/// candidate mirrors (bisectors, weight factors through the edge and the
/// supplied `extra_candidates`) are screened for oddness and closed under
/// reflection; the result is flagged as containment-only.
pub fn predict(f: &FiniteDistribution, extra_candidates: &[Hyperplane]) -> Result<StationaryPrediction, StationaryError> {
    let support: Vec<_> = f.support().collect();
    if let [single] = support.as_slice() {
        if let Weight::Exact(g) = &single.weight {
            let mut pred = predict_single_point(g, &single.point)?;
            for h in extra_candidates {
                let local = to_local(h, &single.point);
                if !pred.hyperplanes.iter().any(|p| p.approx_eq(h, crate::geometry::HYPERPLANE_TOL))
                    && pred.generators.iter().all(|p| hyperplanes::is_linear_factor(p, &local))
                {
                    pred.hyperplanes.push(h.clone());
                }
            }
            return Ok(pred);
        }
    }
    let mut candidates = coxeter::candidate_mirrors(f);
    for h in extra_candidates {
        if h.dimension() != f.dimension() {
            return Err(StationaryError::DimensionMismatch {
                expected: f.dimension(),
                found: h.dimension(),
            });
        }
        if !candidates.iter().any(|c| c.approx_eq(h, crate::geometry::HYPERPLANE_TOL)) {
            candidates.push(h.clone());
        }
    }
    let odd: Vec<Hyperplane> = candidates.into_iter().filter(|h| coxeter::is_odd(f, h)).collect();
    let mut notes = vec!["containment only: listed mirrors are stationary, other stationary points may exist".to_string()];
    let hyperplanes = if odd.is_empty() {
        notes.push("no mirror of odd symmetry found".to_string());
        odd
    } else {
        let closed = coxeter::closure(&odd, coxeter::DEFAULT_MAX_PLANES)?;
        if closed.is_closed() {
            // Reflections in the generated group keep f odd; re-check anyway.
            closed.hyperplanes.into_iter().filter(|h| coxeter::is_odd(f, h)).collect()
        } else {
            notes.push("mirror closure exceeded its bound; reporting the odd mirrors only".to_string());
            odd
        }
    };
    Ok(StationaryPrediction {
        kind: PredictionKind::Containment,
        dimension: f.dimension(),
        generators: Vec::new(),
        hyperplanes,
        edge: Some(coxeter::span_support(f)),
        basepoint: f.support_points()[0].clone(),
        containment_only: true,
        notes,
    })
}

pub(crate) fn to_local(h: &Hyperplane, basepoint: &[f64]) -> Hyperplane {
    let shift: f64 = h.normal().iter().zip(basepoint).map(|(a, b)| a * b).sum();
    Hyperplane::new(h.normal().to_vec(), h.offset() - shift).expect("unit normal")
}

/// Scale-relative test `|g(x − b)| ≤ tol·‖g‖·max(1, |x − b|)^{deg g}` for
/// every generator `g`, where `‖g‖` is the largest absolute coefficient.
///
/// `tol = 0` evaluates exactly on the binary values of `x` and `b`. For
/// containment predictions `x` must lie on one of the mirrors, within
/// `tol·max(1, |x|)`.
pub fn membership(pred: &StationaryPrediction, x: &[f64], tol: f64) -> Result<bool, StationaryError> {
    if x.len() != pred.dimension {
        return Err(StationaryError::DimensionMismatch {
            expected: pred.dimension,
            found: x.len(),
        });
    }
    if !(tol >= 0.0) {
        return Err(StationaryError::InvalidTolerance("non-negative"));
    }
    match pred.kind {
        PredictionKind::SinglePoint => generators_vanish(&pred.generators, &pred.basepoint, x, tol),
        PredictionKind::Containment => {
            let scale = norm(x).max(1.0);
            Ok(pred.hyperplanes.iter().any(|h| h.signed_distance(x).abs() <= tol * scale))
        }
    }
}

pub(crate) fn generators_vanish(gens: &[Polynomial], basepoint: &[f64], x: &[f64], tol: f64) -> Result<bool, StationaryError> {
    if tol == 0.0 {
        let exact: Option<Vec<Rational>> = x
            .iter()
            .zip(basepoint)
            .map(|(a, b)| Some(Rational::from_float(*a)? - Rational::from_float(*b)?))
            .collect();
        let Some(local) = exact else { return Ok(false) };
        for g in gens {
            if !g.evaluate(&local)?.is_zero() {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    let local = sub(x, basepoint);
    let scale = norm(&local).max(1.0);
    for g in gens {
        let bound = tol * g.max_abs_coefficient() * scale.powi(g.degree().unwrap_or(0) as i32);
        if g.evaluate_f64(&local)?.abs() > bound {
            return Ok(false);
        }
    }
    Ok(true)
}
