//! Numeric ground truth: mollified spherical means and wave solutions.
//!
//! A point `x` is stationary for `f` when `f̂(x, r) = M(f∗φ)(x, r)` vanishes
//! for every radius `r`. The oracle replaces "every radius" by a logarithmic
//! grid and measures the supremum of `|f̂|` over it, normalized by a typical
//! value of the same quantity at random probe points.

mod field;
mod mollifier;
mod quadrature;
mod verify;
mod wave;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coxeter::{CoxeterError, FiniteDistribution};
use crate::geometry::distance;
use crate::stationary::{GridBox, StationaryError};

pub use field::{spherical_mean, MollifiedField, MAX_BUMP_DERIVATIVE_ORDER};
pub use mollifier::{unit_sphere_area, MollifierKind, RadialMollifier};
pub use quadrature::{gauss_legendre, GaussLegendre};
pub use verify::{verify_prediction, PointVerdict, StationarityReport, Verdict, VerificationStatus};
pub use wave::{wave_eval, wave_reference_scale, wave_series};

/// Default pass threshold `τ` on the normalized indicator.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;
/// Default angular quadrature order.
pub const DEFAULT_QUAD_ORDER: usize = 64;
/// Default number of radii.
pub const DEFAULT_RADII: usize = 96;
/// Number of probes behind `reference_scale`.
pub const REFERENCE_PROBES: usize = 32;

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("invalid oracle configuration: {0}")]
    InvalidConfig(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("numeric oracle supports n = 2 and n = 3 only, got n = {0}")]
    UnsupportedDimension(usize),
    #[error("derivative order {0} exceeds the bump limit of {MAX_BUMP_DERIVATIVE_ORDER}")]
    DerivativeOrderTooHigh(u32),
    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("time must be positive and finite, got {0}")]
    InvalidTime(f64),
    #[error("quadrature did not converge at {location:?}: doubling the order changed the indicator by {relative_change:e} (relative)")]
    NonConvergence { location: Vec<f64>, relative_change: f64 },
    #[error(transparent)]
    Stationary(#[from] StationaryError),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
}

/// Log-spaced radii `r_min = r_0 < … < r_{count−1} = r_max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub count: usize,
}

impl RGrid {
    pub fn new(r_min: f64, r_max: f64, count: usize) -> Result<Self, OracleError> {
        let g = RGrid { r_min, r_max, count };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        if !(self.r_min > 0.0 && self.r_max > self.r_min && self.r_max.is_finite()) || self.count < 8 {
            return Err(OracleError::InvalidConfig(format!(
                "r grid needs r_max > r_min > 0 and count >= 8, got {self:?}"
            )));
        }
        Ok(())
    }

    pub fn radii(&self) -> Vec<f64> {
        let ratio = (self.r_max / self.r_min).ln();
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.r_max
                } else {
                    self.r_min * (ratio * i as f64 / (self.count - 1) as f64).exp()
                }
            })
            .collect()
    }
}

/// Optional overrides of the default oracle parameters.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mollifier: Option<MollifierKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad_order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_grid: Option<RGrid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Everything the indicator depends on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    pub mollifier: RadialMollifier,
    pub quad_order: usize,
    pub r_grid: RGrid,
    pub tolerance: f64,
    /// Median indicator over [`REFERENCE_PROBES`] probes of [`probe_box`].
    pub reference_scale: f64,
    pub seed: u64,
}

/// Default mollifier width: a tenth of the support diameter, or 0.1.
pub fn default_width(f: &FiniteDistribution) -> f64 {
    let d = f.diameter();
    if d > 0.0 {
        0.1 * d
    } else {
        0.1
    }
}

/// Region in which probes and off-set samples are drawn: the cube of
/// half-width `2·max(1, diameter)` around the centroid of the support.
pub fn probe_box(f: &FiniteDistribution) -> GridBox {
    let pts = f.support_points();
    let n = f.dimension();
    let mut c = vec![0.0; n];
    for p in &pts {
        c.iter_mut().zip(p).for_each(|(a, b)| *a += b / pts.len() as f64);
    }
    GridBox::centered(&c, 2.0 * f.diameter().max(1.0))
}

impl OracleConfig {
    /// Defaults for `f`: Gaussian of width [`default_width`], order 64,
    /// 96 radii on `[σ/2, diameter + 6σ]`, `τ = 10⁻⁶`, seed 0.
    pub fn for_distribution(f: &FiniteDistribution) -> Result<Self, OracleError> {
        Self::with_options(f, &OracleOptions::default())
    }

    pub fn with_options(f: &FiniteDistribution, opts: &OracleOptions) -> Result<Self, OracleError> {
        let n = f.dimension();
        if !(2..=3).contains(&n) {
            return Err(OracleError::UnsupportedDimension(n));
        }
        let kind = opts.mollifier.unwrap_or(MollifierKind::Gaussian { sigma: default_width(f) });
        let mollifier = RadialMollifier::new(kind, n)?;
        let w = mollifier.width();
        let r_grid = match opts.r_grid {
            Some(g) => {
                g.validate()?;
                g
            }
            None => RGrid::new(0.5 * w, f.diameter() + 6.0 * w, DEFAULT_RADII)?,
        };
        let quad_order = opts.quad_order.unwrap_or(DEFAULT_QUAD_ORDER);
        if quad_order < 8 {
            return Err(OracleError::InvalidConfig(format!("quad_order must be at least 8, got {quad_order}")));
        }
        let tolerance = opts.tolerance.unwrap_or(DEFAULT_TOLERANCE);
        if !(tolerance > 0.0 && tolerance < 1.0) {
            return Err(OracleError::InvalidConfig(format!("tolerance must lie in (0, 1), got {tolerance}")));
        }
        let mut cfg = OracleConfig {
            mollifier,
            quad_order,
            r_grid,
            tolerance,
            reference_scale: 1.0,
            seed: opts.seed.unwrap_or(0),
        };
        cfg.reference_scale = cfg.compute_reference_scale(f)?;
        Ok(cfg)
    }

    /// Same configuration with a doubled quadrature order (reference scale kept).
    pub fn refined(&self) -> Self {
        OracleConfig {
            quad_order: 2 * self.quad_order,
            ..self.clone()
        }
    }

    fn compute_reference_scale(&self, f: &FiniteDistribution) -> Result<f64, OracleError> {
        let field = MollifiedField::new(f, &self.mollifier)?;
        let bx = probe_box(f);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x5245_4645_5245_4e43);
        let probes: Vec<Vec<f64>> = (0..REFERENCE_PROBES).map(|_| bx.random_point(&mut rng)).collect();
        let mut values = probes
            .par_iter()
            .map(|x| self.indicator_with(&field, f, x).map(|s| s.indicator))
            .collect::<Result<Vec<f64>, _>>()?;
        values.sort_by(f64::total_cmp);
        let m = REFERENCE_PROBES / 2;
        let median = 0.5 * (values[m - 1] + values[m]);
        if !(median > 0.0 && median.is_finite()) {
            return Err(OracleError::InvalidConfig(format!(
                "reference scale is {median}; the distribution looks numerically zero"
            )));
        }
        Ok(median)
    }

    /// Radii used at `x`: the configured grid, widened when it stops short
    /// of `max distance to the support + 3·width`, plus radii at half-width
    /// spacing around each source distance so that peaks are not missed.
    pub fn radii_at(&self, f: &FiniteDistribution, x: &[f64]) -> (Vec<f64>, f64, bool) {
        let w = self.mollifier.width();
        let dists: Vec<f64> = f.support_points().iter().map(|p| distance(p, x)).collect();
        let needed = dists.iter().copied().fold(0.0, f64::max) + 3.0 * w;
        let (grid, widened) = if needed > self.r_grid.r_max {
            (RGrid { r_max: needed, ..self.r_grid }, true)
        } else {
            (self.r_grid, false)
        };
        let mut radii = grid.radii();
        for d in dists {
            for k in -6..=6 {
                let r = d + 0.5 * k as f64 * w;
                if r >= grid.r_min && r <= grid.r_max {
                    radii.push(r);
                }
            }
        }
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        (radii, grid.r_max, widened)
    }

    fn indicator_with(&self, field: &MollifiedField, f: &FiniteDistribution, x: &[f64]) -> Result<IndicatorSample, OracleError> {
        let (radii, r_max, widened) = self.radii_at(f, x);
        let mut sup: f64 = 0.0;
        for r in radii {
            sup = sup.max(field.sphere_mean(x, r, self.quad_order)?.abs());
        }
        Ok(IndicatorSample {
            indicator: sup,
            normalized: sup / self.reference_scale,
            r_max,
            widened,
        })
    }

    pub fn verdict(&self, normalized: f64) -> Verdict {
        if normalized <= self.tolerance {
            Verdict::Stationary
        } else {
            Verdict::NotStationary
        }
    }
}

/// Indicator value at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IndicatorSample {
    /// `sup_r |f̂(x, r)|` over the radii.
    pub indicator: f64,
    /// `indicator / reference_scale`.
    pub normalized: f64,
    /// Largest radius used.
    pub r_max: f64,
    /// Whether the configured grid had to be extended.
    pub widened: bool,
}

/// `sup_r |f̂(x, r)|` over the radii of `cfg`.
pub fn stationarity_indicator(f: &FiniteDistribution, cfg: &OracleConfig, x: &[f64]) -> Result<IndicatorSample, OracleError> {
    let field = MollifiedField::new(f, &cfg.mollifier)?;
    cfg.indicator_with(&field, f, x)
}

/// Indicators at many points, in parallel, in input order.
pub fn indicators(f: &FiniteDistribution, cfg: &OracleConfig, points: &[Vec<f64>]) -> Result<Vec<IndicatorSample>, OracleError> {
    let field = MollifiedField::new(f, &cfg.mollifier)?;
    points.par_iter().map(|x| cfg.indicator_with(&field, f, x)).collect()
}

/// `(f∗φ)(z)`.
pub fn mollified_eval(f: &FiniteDistribution, phi: &RadialMollifier, z: &[f64]) -> Result<f64, OracleError> {
    Ok(MollifiedField::new(f, phi)?.eval(z))
}

/// Checks that doubling the quadrature order moves the indicator by less
/// than `1e−6` relative (absolute floor `1e−12·reference_scale`) at `points`.
pub fn check_convergence(f: &FiniteDistribution, cfg: &OracleConfig, points: &[Vec<f64>]) -> Result<(), OracleError> {
    let coarse = indicators(f, cfg, points)?;
    let fine = indicators(f, &cfg.refined(), points)?;
    for ((x, a), b) in points.iter().zip(&coarse).zip(&fine) {
        let diff = (a.indicator - b.indicator).abs();
        let size = a.indicator.max(b.indicator);
        if diff > 1e-6 * size + 1e-12 * cfg.reference_scale {
            return Err(OracleError::NonConvergence {
                location: x.clone(),
                relative_change: diff / size.max(f64::MIN_POSITIVE),
            });
        }
    }
    Ok(())
}

/// Normalized indicator on the grid of `bx` (row-major, last axis fastest).
pub fn scan(f: &FiniteDistribution, cfg: &OracleConfig, bx: &GridBox, resolution: usize) -> Result<Vec<(Vec<f64>, f64)>, OracleError> {
    if bx.dimension() != f.dimension() {
        return Err(OracleError::DimensionMismatch {
            expected: f.dimension(),
            found: bx.dimension(),
        });
    }
    if resolution < 2 {
        return Err(OracleError::InvalidConfig(format!("resolution must be at least 2, got {resolution}")));
    }
    let points: Vec<Vec<f64>> = (0..bx.grid_size(resolution)).map(|i| bx.grid_point(resolution, i)).collect();
    let values = indicators(f, cfg, &points)?;
    Ok(points.into_iter().zip(values).map(|(p, v)| (p, v.indicator)).collect())
}

/// Formats a float with 17 significant digits.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV with columns `x1..xn, indicator`.
pub fn scan_csv(rows: &[(Vec<f64>, f64)]) -> String {
    let n = rows.first().map_or(0, |r| r.0.len());
    let mut out: String = (1..=n).map(|i| format!("x{i},")).collect();
    out.push_str("indicator\n");
    for (p, v) in rows {
        for c in p {
            out.push_str(&format_float(*c));
            out.push(',');
        }
        out.push_str(&format_float(*v));
        out.push('\n');
    }
    out
}
