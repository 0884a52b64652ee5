//! Checking a symbolic prediction against the numeric indicator.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_convergence, indicators, probe_box, OracleConfig, OracleError, RGrid, RadialMollifier};
use crate::coxeter::FiniteDistribution;
use crate::stationary::{PredictionKind, StationaryPrediction, VarietySampler};

/// Minimum off-set distance in units of the mollifier width.
pub const OFF_SET_SEPARATION: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Stationary,
    NotStationary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerificationStatus {
    Pass,
    Fail,
    /// The predicted set is nonempty but no point of it was found.
    SamplingFailure,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointVerdict {
    pub location: Vec<f64>,
    pub indicator: f64,
    pub normalized: f64,
    pub verdict: Verdict,
    /// Largest radius used at this point.
    pub r_max: f64,
    /// Whether the radius grid was extended to reach every source.
    pub widened: bool,
    /// Estimated distance to the predicted set (off-points only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationarityReport {
    pub status: VerificationStatus,
    pub passed: bool,
    pub tolerance: f64,
    pub reference_scale: f64,
    pub mollifier: RadialMollifier,
    pub quad_order: usize,
    pub r_grid: RGrid,
    pub seed: u64,
    pub on_requested: usize,
    pub on_found: usize,
    pub off_requested: usize,
    pub off_found: usize,
    pub on_points: Vec<PointVerdict>,
    pub off_points: Vec<PointVerdict>,
    /// Stationary off-points of a containment prediction: numeric zeros the
    /// mirrors do not explain.
    #[serde(default)]
    pub unclassified_candidates: Vec<Vec<f64>>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl StationarityReport {
    /// On-points judged not stationary.
    pub fn on_failures(&self) -> usize {
        self.on_points.iter().filter(|p| p.verdict == Verdict::NotStationary).count()
    }

    /// Off-points judged stationary.
    pub fn off_failures(&self) -> usize {
        self.off_points.iter().filter(|p| p.verdict == Verdict::Stationary).count()
    }
}

/// Samples `on_samples` points of `pred` and `off_samples` points at least
/// [`OFF_SET_SEPARATION`] mollifier widths away from it, all inside
/// [`probe_box`], and classifies them with the indicator.
///
/// For single-source predictions every on-point must come out stationary
/// and every off-point not. Mirror predictions only claim containment, so
/// stationary off-points are listed as unclassified candidates without
/// failing.
///
/// Before classifying, the quadrature is checked by doubling its order at
/// four of the sampled points; a change above `1e−6` (relative) is an error.
pub fn verify_prediction(
    f: &FiniteDistribution,
    pred: &StationaryPrediction,
    cfg: &OracleConfig,
    on_samples: usize,
    off_samples: usize,
    seed: u64,
) -> Result<StationarityReport, OracleError> {
    if pred.dimension != f.dimension() {
        return Err(OracleError::DimensionMismatch {
            expected: f.dimension(),
            found: pred.dimension,
        });
    }
    let mut notes = pred.notes.clone();
    let bx = probe_box(f);
    let sampler = VarietySampler::new(pred);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let cloud = sampler.sample((4 * on_samples).max(400), &bx, &mut rng);
    let on: Vec<Vec<f64>> = if cloud.len() <= on_samples {
        cloud.clone()
    } else {
        (0..on_samples).map(|k| cloud[k * cloud.len() / on_samples].clone()).collect()
    };

    let min_dist = OFF_SET_SEPARATION * cfg.mollifier.width();
    let mut off = Vec::new();
    let mut off_dist = Vec::new();
    let mut attempts = 0;
    while off.len() < off_samples && attempts < 50 * off_samples {
        attempts += 1;
        let x = bx.random_point(&mut rng);
        let d = sampler.distance_estimate(&x, &cloud, &mut rng);
        if d >= min_dist {
            off.push(x);
            off_dist.push(d);
        }
    }

    let probes: Vec<Vec<f64>> = on.iter().take(2).chain(off.iter().take(2)).cloned().collect();
    check_convergence(f, cfg, &probes)?;

    let classify = |points: &[Vec<f64>], dists: Option<&[f64]>| -> Result<Vec<PointVerdict>, OracleError> {
        Ok(indicators(f, cfg, points)?
            .into_iter()
            .enumerate()
            .map(|(i, s)| PointVerdict {
                location: points[i].clone(),
                indicator: s.indicator,
                normalized: s.normalized,
                verdict: cfg.verdict(s.normalized),
                r_max: s.r_max,
                widened: s.widened,
                distance: dists.map(|d| d[i]),
            })
            .collect())
    };
    let on_points = classify(&on, None)?;
    let off_points = classify(&off, Some(&off_dist))?;

    let on_bad = on_points.iter().filter(|p| p.verdict == Verdict::NotStationary).count();
    let off_bad = off_points.iter().filter(|p| p.verdict == Verdict::Stationary).count();
    if on.len() < on_samples {
        notes.push(format!("found {} of {} requested on-set points", on.len(), on_samples));
    }
    if off.len() < off_samples {
        notes.push(format!("found {} of {} requested off-set points", off.len(), off_samples));
    }
    if on_points.iter().chain(&off_points).any(|p| p.widened) {
        notes.push("radius grid widened at some points to reach every source".into());
    }
    let empty = pred.is_trivially_empty();
    if empty {
        notes.push("prediction is empty; only off-set points were checked".into());
    }
    let containment = pred.kind == PredictionKind::Containment;
    let unclassified_candidates: Vec<Vec<f64>> = if containment {
        off_points
            .iter()
            .filter(|p| p.verdict == Verdict::Stationary)
            .map(|p| p.location.clone())
            .collect()
    } else {
        Vec::new()
    };
    if !unclassified_candidates.is_empty() {
        notes.push(format!(
            "{off_bad} off-set points are stationary; the prediction claims containment only"
        ));
    }
    let status = if (on.is_empty() && !empty && on_samples > 0) || (off.is_empty() && off_samples > 0) {
        VerificationStatus::SamplingFailure
    } else if on_bad > 0 || (!containment && off_bad > 0) {
        VerificationStatus::Fail
    } else {
        VerificationStatus::Pass
    };
    Ok(StationarityReport {
        status,
        passed: status == VerificationStatus::Pass,
        tolerance: cfg.tolerance,
        reference_scale: cfg.reference_scale,
        mollifier: cfg.mollifier.clone(),
        quad_order: cfg.quad_order,
        r_grid: cfg.r_grid,
        seed,
        on_requested: on_samples,
        on_found: on_points.len(),
        off_requested: off_samples,
        off_found: off_points.len(),
        on_points,
        off_points,
        unclassified_candidates,
        notes,
    })
}
