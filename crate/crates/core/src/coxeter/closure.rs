use std::collections::HashSet;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::CoxeterError;
use crate::geometry::{dot, Hyperplane, HYPERPLANE_TOL};

/// Default cap on the number of mirrors before a closure gives up.
pub const DEFAULT_MAX_PLANES: usize = 64;

const GROUP_ENUMERATION_CAP: usize = 100_000;

/// Reflection of `y` across `H`; points of `H` are their own mirrors.
pub fn mirror_point(y: &[f64], h: &Hyperplane) -> Vec<f64> {
    let s = h.signed_distance(y);
    y.iter().zip(h.normal()).map(|(yi, ni)| yi - 2.0 * s * ni).collect()
}

/// Image of `h` under the reflection across `mirror`, canonicalized.
pub fn reflect_hyperplane(h: &Hyperplane, mirror: &Hyperplane) -> Hyperplane {
    let m = mirror.normal();
    let c = dot(h.normal(), m);
    let normal: Vec<f64> = h.normal().iter().zip(m).map(|(a, b)| a - 2.0 * c * b).collect();
    let p = mirror_point(&h.point(), mirror);
    let offset = dot(&normal, &p);
    Hyperplane::new(normal, offset).expect("reflections preserve unit normals")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosureStatus {
    /// Closed under all pairwise reflections. `group_order_bound` is the order
    /// of the generated group when its enumeration finishes below 100 000
    /// elements, and that cap otherwise.
    Closed { group_order_bound: usize },
    ExceededBound,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoxeterClosureResult {
    pub hyperplanes: Vec<Hyperplane>,
    pub status: ClosureStatus,
    /// A point on every mirror, when the closed system has one.
    pub common_point: Option<Vec<f64>>,
}

impl CoxeterClosureResult {
    pub fn is_closed(&self) -> bool {
        matches!(self.status, ClosureStatus::Closed { .. })
    }
}

fn contains(list: &[Hyperplane], h: &Hyperplane) -> bool {
    list.iter().any(|g| g.approx_eq(h, HYPERPLANE_TOL))
}

/// Adds reflections of mirrors across mirrors until nothing new appears or
/// more than `max_planes` mirrors accumulate.
pub fn closure(initial: &[Hyperplane], max_planes: usize) -> Result<CoxeterClosureResult, CoxeterError> {
    let Some(first) = initial.first() else {
        return Err(CoxeterError::EmptyInput);
    };
    let n = first.dimension();
    if let Some(bad) = initial.iter().find(|h| h.dimension() != n) {
        return Err(CoxeterError::DimensionMismatch {
            expected: n,
            found: bad.dimension(),
        });
    }
    let mut planes: Vec<Hyperplane> = Vec::new();
    for h in initial {
        if !contains(&planes, h) {
            planes.push(h.clone());
        }
    }
    if max_planes < planes.len() {
        return Err(CoxeterError::BoundTooSmall {
            bound: max_planes,
            initial: planes.len(),
        });
    }
    // Pairs (i, j) with i or j >= `done` still need to be reflected.
    let mut done = 0;
    while done < planes.len() {
        let end = planes.len();
        for i in 0..end {
            for j in 0..end {
                if i < done && j < done {
                    continue;
                }
                let r = reflect_hyperplane(&planes[i], &planes[j]);
                if !contains(&planes, &r) {
                    planes.push(r);
                    if planes.len() > max_planes {
                        return Ok(CoxeterClosureResult {
                            hyperplanes: planes,
                            status: ClosureStatus::ExceededBound,
                            common_point: None,
                        });
                    }
                }
            }
        }
        done = end;
    }
    let group_order_bound = group_order(&planes);
    let common_point = common_point(&planes);
    Ok(CoxeterClosureResult {
        hyperplanes: planes,
        status: ClosureStatus::Closed { group_order_bound },
        common_point,
    })
}

/// Least-squares point on all planes, accepted when every residual is below
/// 1e−8.
pub fn common_point(planes: &[Hyperplane]) -> Option<Vec<f64>> {
    let n = planes.first()?.dimension();
    let a = DMatrix::from_fn(planes.len(), n, |i, j| planes[i].normal()[j]);
    let b = DVector::from_iterator(planes.len(), planes.iter().map(Hyperplane::offset));
    let x = a.clone().svd(true, true).solve(&b, 1e-12).ok()?;
    let point: Vec<f64> = x.iter().copied().collect();
    planes
        .iter()
        .all(|h| h.signed_distance(&point).abs() < 1e-8)
        .then_some(point)
}

type AffineKey = Vec<i64>;

fn key(m: &[f64]) -> AffineKey {
    m.iter().map(|v| (v * 1e7).round() as i64).collect()
}

/// Order of the group generated by the reflections, by breadth-first
/// enumeration of its elements as affine maps.
fn group_order(planes: &[Hyperplane]) -> usize {
    let n = planes[0].dimension();
    // Element layout: n×n matrix row-major followed by the translation.
    let generators: Vec<Vec<f64>> = planes
        .iter()
        .map(|h| {
            let mut g = vec![0.0; n * n + n];
            for i in 0..n {
                for j in 0..n {
                    g[i * n + j] = if i == j { 1.0 } else { 0.0 } - 2.0 * h.normal()[i] * h.normal()[j];
                }
                g[n * n + i] = 2.0 * h.offset() * h.normal()[i];
            }
            g
        })
        .collect();
    let compose = |a: &[f64], b: &[f64]| {
        let mut c = vec![0.0; n * n + n];
        for i in 0..n {
            for j in 0..n {
                c[i * n + j] = (0..n).map(|k| a[i * n + k] * b[k * n + j]).sum();
            }
            c[n * n + i] = (0..n).map(|k| a[i * n + k] * b[n * n + k]).sum::<f64>() + a[n * n + i];
        }
        c
    };
    let mut identity = vec![0.0; n * n + n];
    for i in 0..n {
        identity[i * n + i] = 1.0;
    }
    let mut seen: HashSet<AffineKey> = HashSet::new();
    seen.insert(key(&identity));
    let mut frontier = vec![identity];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for e in &frontier {
            for g in &generators {
                let c = compose(g, e);
                if seen.insert(key(&c)) {
                    if seen.len() >= GROUP_ENUMERATION_CAP {
                        return GROUP_ENUMERATION_CAP;
                    }
                    next.push(c);
                }
            }
        }
        frontier = next;
    }
    seen.len()
}
