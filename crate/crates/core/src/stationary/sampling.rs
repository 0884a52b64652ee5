use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{generators_vanish, PredictionKind, StationaryError, StationaryPrediction};
use crate::geometry::{distance, norm, sub};
use crate::polyalg::{FloatPolynomial, Polynomial};

/// Axis-aligned box `[lo_1, hi_1] × … × [lo_n, hi_n]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl GridBox {
    /// `[lo, hi]ⁿ`.
    pub fn cube(dimension: usize, lo: f64, hi: f64) -> Self {
        GridBox {
            lo: vec![lo; dimension],
            hi: vec![hi; dimension],
        }
    }

    /// Cube of half-width `half` around `center`.
    pub fn centered(center: &[f64], half: f64) -> Self {
        GridBox {
            lo: center.iter().map(|c| c - half).collect(),
            hi: center.iter().map(|c| c + half).collect(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().zip(&self.lo).zip(&self.hi).all(|((v, lo), hi)| v >= lo && v <= hi)
    }

    pub fn diagonal(&self) -> f64 {
        distance(&self.lo, &self.hi)
    }

    pub fn random_point<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(lo, hi)| if hi > lo { rng.random_range(*lo..*hi) } else { *lo })
            .collect()
    }

    /// Grid point `index` of a row-major grid with `resolution` points per
    /// axis (the last axis varies fastest).
    pub fn grid_point(&self, resolution: usize, mut index: usize) -> Vec<f64> {
        let n = self.dimension();
        let mut x = vec![0.0; n];
        for axis in (0..n).rev() {
            let i = index % resolution;
            index /= resolution;
            let (lo, hi) = (self.lo[axis], self.hi[axis]);
            x[axis] = if i + 1 == resolution {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (resolution - 1) as f64
            };
        }
        x
    }

    pub fn grid_size(&self, resolution: usize) -> usize {
        resolution.pow(self.dimension() as u32)
    }
}

/// Grid points where every polynomial vanishes to the scale-relative
/// tolerance `tol`, in row-major order.
pub fn sample_zero_grid(
    polys: &[Polynomial],
    bx: &GridBox,
    resolution: usize,
    tol: f64,
) -> Result<Vec<Vec<f64>>, StationaryError> {
    let Some(first) = polys.first() else {
        return Err(StationaryError::EmptyPolynomialList);
    };
    let n = first.dimension();
    if let Some(bad) = polys.iter().find(|p| p.dimension() != n) {
        return Err(StationaryError::DimensionMismatch {
            expected: n,
            found: bad.dimension(),
        });
    }
    if bx.dimension() != n {
        return Err(StationaryError::DimensionMismatch {
            expected: n,
            found: bx.dimension(),
        });
    }
    if resolution < 2 {
        return Err(StationaryError::InvalidResolution(resolution));
    }
    if !(tol > 0.0) {
        return Err(StationaryError::InvalidTolerance("positive"));
    }
    let origin = vec![0.0; n];
    Ok(filter_grid(bx, resolution, |x| {
        generators_vanish(polys, &origin, x, tol).unwrap_or(false)
    }))
}

pub(crate) fn filter_grid<F>(bx: &GridBox, resolution: usize, keep: F) -> Vec<Vec<f64>>
where
    F: Fn(&[f64]) -> bool + Sync,
{
    (0..bx.grid_size(resolution))
        .into_par_iter()
        .filter_map(|i| {
            let x = bx.grid_point(resolution, i);
            keep(&x).then_some(x)
        })
        .collect()
}

/// Generators scaled to unit coefficient norm, with their gradients.
struct NewtonSystem {
    basepoint: Vec<f64>,
    values: Vec<FloatPolynomial>,
    gradients: Vec<Vec<FloatPolynomial>>,
}

impl NewtonSystem {
    fn new(gens: &[Polynomial], basepoint: &[f64]) -> Self {
        let n = basepoint.len();
        let mut values = Vec::new();
        let mut gradients = Vec::new();
        for g in gens {
            let s = 1.0 / g.max_abs_coefficient();
            values.push(g.to_float().scale(s));
            gradients.push((0..n).map(|i| g.partial(i).to_float().scale(s)).collect());
        }
        NewtonSystem {
            basepoint: basepoint.to_vec(),
            values,
            gradients,
        }
    }

    /// Gauss–Newton iteration towards the common zero set. Returns the final
    /// point (global coordinates) and the length of the last step.
    fn project(&self, start: &[f64]) -> Option<(Vec<f64>, f64)> {
        let n = start.len();
        let m = self.values.len();
        let mut x = sub(start, &self.basepoint);
        let mut last = f64::INFINITY;
        for _ in 0..400 {
            let r = DVector::from_iterator(m, self.values.iter().map(|g| g.evaluate(&x)));
            let j = DMatrix::from_fn(m, n, |a, b| self.gradients[a][b].evaluate(&x));
            let svd = j.svd(true, true);
            let smax = svd.singular_values.max();
            if !(smax > 0.0 && smax.is_finite()) {
                break;
            }
            let delta = svd.solve(&r, 1e-15 * smax).ok()?;
            let step = delta.norm();
            x.iter_mut().zip(delta.iter()).for_each(|(xi, d)| *xi -= d);
            if !step.is_finite() || norm(&x) > 1e6 {
                return None;
            }
            last = step;
            if step <= 1e-15 * norm(&x).max(1.0) {
                break;
            }
        }
        let global = x.iter().zip(&self.basepoint).map(|(a, b)| a + b).collect();
        Some((global, last))
    }
}

/// Samples points of a predicted set and estimates distances to it.
pub struct VarietySampler<'a> {
    pred: &'a StationaryPrediction,
    system: Option<NewtonSystem>,
}

/// Grid resolution used to seed on-set samples with exact zeros.
const SEED_GRID: usize = 33;

impl<'a> VarietySampler<'a> {
    pub fn new(pred: &'a StationaryPrediction) -> Self {
        let system = (pred.kind == PredictionKind::SinglePoint && !pred.is_trivially_empty())
            .then(|| NewtonSystem::new(&pred.generators, &pred.basepoint));
        VarietySampler { pred, system }
    }

    /// A nearby point of the predicted set, accepted only when the final
    /// Newton step is below 1e−10 and the membership test passes at 1e−9.
    pub fn project(&self, x: &[f64]) -> Option<Vec<f64>> {
        match self.pred.kind {
            PredictionKind::Containment => {
                let h = self.pred.hyperplanes.iter().min_by(|a, b| {
                    a.signed_distance(x).abs().total_cmp(&b.signed_distance(x).abs())
                })?;
                Some(crate::coxeter::mirror_point(x, h).iter().zip(x).map(|(m, v)| 0.5 * (m + v)).collect())
            }
            PredictionKind::SinglePoint => {
                let (p, step) = self.system.as_ref()?.project(x)?;
                let scale = norm(&sub(&p, &self.pred.basepoint)).max(1.0);
                (step <= 1e-10 * scale && self.pred.contains(&p, 1e-9).unwrap_or(false)).then_some(p)
            }
        }
    }

    /// Up to `count` distinct points of the predicted set inside `bx`:
    /// grid zeros first (at most half), then Newton projections of random
    /// starts. Fewer points come back when the set is small (for example a
    /// single vertex).
    pub fn sample<R: Rng>(&self, count: usize, bx: &GridBox, rng: &mut R) -> Vec<Vec<f64>> {
        if self.pred.is_trivially_empty() || count == 0 {
            return Vec::new();
        }
        let min_sep = 1e-6 * bx.diagonal().max(1.0);
        let mut out: Vec<Vec<f64>> = Vec::new();
        let push = |p: Vec<f64>, out: &mut Vec<Vec<f64>>| {
            if out.len() < count && bx.contains(&p) && !out.iter().any(|q| distance(q, &p) < min_sep) {
                out.push(p);
            }
        };
        if self.pred.kind == PredictionKind::SinglePoint {
            let grid = filter_grid(bx, SEED_GRID, |x| self.pred.contains(x, 1e-12).unwrap_or(false));
            let take = grid.len().min(count / 2);
            for k in 0..take {
                push(grid[k * grid.len() / take].clone(), &mut out);
            }
        }
        let mut attempts = 0;
        while out.len() < count && attempts < 40 * count + 200 {
            attempts += 1;
            let start = bx.random_point(rng);
            if let Some(p) = self.project(&start) {
                push(p, &mut out);
            }
        }
        out
    }

    /// Upper estimate of the distance from `x` to the predicted set: exact
    /// for mirrors, otherwise the minimum over `cloud`, the listed
    /// hyperplanes and Newton projections from `x` and jittered starts.
    pub fn distance_estimate<R: Rng>(&self, x: &[f64], cloud: &[Vec<f64>], rng: &mut R) -> f64 {
        let planes = self
            .pred
            .hyperplanes
            .iter()
            .map(|h| h.signed_distance(x).abs())
            .fold(f64::INFINITY, f64::min);
        if self.pred.kind == PredictionKind::Containment || self.pred.is_trivially_empty() {
            return planes;
        }
        let mut best = cloud.iter().map(|p| distance(p, x)).fold(planes, f64::min);
        let mut starts = vec![x.to_vec()];
        for _ in 0..8 {
            let spread = if best.is_finite() { 0.5 * best } else { 1.0 };
            starts.push(x.iter().map(|v| v + rng.random_range(-spread..spread)).collect());
        }
        for s in starts {
            if let Some(p) = self.project(&s) {
                best = best.min(distance(&p, x));
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stationary::predict_single_point;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(dim: usize, s: &str) -> Polynomial {
        Polynomial::parse(dim, s).unwrap()
    }

    #[test]
    fn grid_examples() {
        let bx = GridBox::cube(2, -1.0, 1.0);
        assert!(sample_zero_grid(&[p(2, "x^2 + y^2 + 1")], &bx, 21, 1e-9).unwrap().is_empty());
        let diag = sample_zero_grid(&[p(2, "x - y")], &bx, 5, 1e-12).unwrap();
        assert_eq!(diag.len(), 5);
        assert!(diag.iter().all(|x| x[0] == x[1]));
        assert_eq!(diag[0], vec![-1.0, -1.0]);
        let axis = sample_zero_grid(&[p(2, "x^2*y"), p(2, "2*y")], &bx, 101, 1e-12).unwrap();
        assert_eq!(axis.len(), 101);
        assert!(axis.iter().all(|x| x[1] == 0.0));
        assert!(sample_zero_grid(&[], &bx, 5, 1e-9).is_err());
        assert!(sample_zero_grid(&[p(2, "x")], &bx, 1, 1e-9).is_err());
    }

    #[test]
    fn row_major_order() {
        let bx = GridBox::cube(2, 0.0, 1.0);
        assert_eq!(bx.grid_point(3, 1), vec![0.0, 0.5]);
        assert_eq!(bx.grid_point(3, 3), vec![0.5, 0.0]);
        assert_eq!(bx.grid_point(3, 8), vec![1.0, 1.0]);
    }

    #[test]
    fn samples_lie_on_irrational_lines() {
        let pred = predict_single_point(&p(2, "x^3 - 3*x*y^2"), &[0.0, 0.0]).unwrap();
        let sampler = VarietySampler::new(&pred);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pts = sampler.sample(60, &GridBox::cube(2, -2.0, 2.0), &mut rng);
        assert_eq!(pts.len(), 60);
        for x in &pts {
            let on_line = pred.hyperplanes.iter().any(|h| h.signed_distance(x).abs() < 1e-12);
            assert!(on_line, "{x:?}");
        }
        let d = sampler.distance_estimate(&[1.0, 0.0], &pts, &mut rng);
        assert!((d - 0.5).abs() < 1e-9, "{d}");
    }

    #[test]
    fn isolated_vertex() {
        // x^3 + 2y^3 and its Laplacian 6x + 12y vanish together only at the origin.
        let pred = predict_single_point(&p(2, "x^3 + 2*y^3"), &[0.0, 0.0]).unwrap();
        let sampler = VarietySampler::new(&pred);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pts = sampler.sample(10, &GridBox::cube(2, -2.0, 2.0), &mut rng);
        assert_eq!(pts.len(), 1, "{pts:?}");
        assert!(norm(&pts[0]) < 1e-9);
        let d = sampler.distance_estimate(&[0.3, 0.4], &pts, &mut rng);
        assert!((d - 0.5).abs() < 1e-6, "{d} {pts:?}");
    }
}
