use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::to_local;
use crate::geometry::{dot, norm, Hyperplane, HYPERPLANE_TOL};
use crate::polyalg::{rationalize, FloatPolynomial, Polynomial};

/// Residual bound for linear factors with irrational normals.
pub const FLOAT_FACTOR_TOL: f64 = 1e-10;

const SEEDS: usize = 96;
const SEED: u64 = 0x6879_7065_7270;

/// Hyperplanes contained in the zero set of `P`, translated to `basepoint`.
///
/// Candidates come from gradients of `P` at sampled zeros and from
/// `candidates` (given in global coordinates). A candidate with linear form
/// `ℓ` is kept when `ℓ` divides `P`: exactly for rational forms, otherwise
/// when `P` restricted to the hyperplane has all coefficients below
/// [`FLOAT_FACTOR_TOL`] relative to `P`. The search is heuristic and may miss
/// factors.
pub fn extract_hyperplanes(p: &Polynomial, basepoint: &[f64], candidates: &[Hyperplane]) -> Vec<Hyperplane> {
    let n = p.dimension();
    if p.is_constant() || basepoint.len() != n {
        return Vec::new();
    }
    let mut local: Vec<Hyperplane> = candidates
        .iter()
        .filter(|h| h.dimension() == n)
        .map(|h| to_local(h, basepoint))
        .collect();
    local.extend(gradient_candidates(p));

    let mut found: Vec<Hyperplane> = Vec::new();
    let mut rejected: Vec<Hyperplane> = Vec::new();
    let pf = p.to_float();
    for h in local {
        let seen = |list: &[Hyperplane]| list.iter().any(|g| g.approx_eq(&h, 1e-7));
        if seen(&found) || seen(&rejected) {
            continue;
        }
        if vanishes_on_probe_points(&pf, &h) && is_linear_factor(p, &h) {
            found.push(h);
        } else {
            rejected.push(h);
        }
    }
    found
        .into_iter()
        .map(|h| {
            let shift = dot(h.normal(), basepoint);
            Hyperplane::new(h.normal().to_vec(), h.offset() + shift).expect("unit normal")
        })
        .fold(Vec::new(), |mut acc: Vec<Hyperplane>, h| {
            if !acc.iter().any(|g| g.approx_eq(&h, HYPERPLANE_TOL)) {
                acc.push(h);
            }
            acc
        })
}

/// Whether the linear form of `h` divides `p` (both in local coordinates).
pub(crate) fn is_linear_factor(p: &Polynomial, h: &Hyperplane) -> bool {
    if p.is_zero() {
        return true;
    }
    if let Some(form) = h.exact_linear_form() {
        return form.divides(p).is_ok_and(|d| d.is_divisible());
    }
    let basis = h.tangent_basis();
    let base = h.point();
    let n = p.dimension();
    // x = base + Σ_j t_j basis_j, a polynomial map from ℝ^{n−1}.
    let matrix: Vec<Vec<f64>> = (0..n).map(|i| basis.iter().map(|b| b[i]).collect()).collect();
    let pf = p.to_float();
    let restricted = pf.substitute_affine(&matrix, &base, n - 1);
    let scale = pf.max_abs_coefficient() * norm(&base).max(1.0).powi(p.degree().unwrap_or(0) as i32);
    restricted.max_abs_coefficient() <= FLOAT_FACTOR_TOL * scale
}

/// Cheap screen: `p` vanishes at a few points of `h`.
fn vanishes_on_probe_points(p: &FloatPolynomial, h: &Hyperplane) -> bool {
    let basis = h.tangent_basis();
    let base = h.point();
    let scale = p.max_abs_coefficient();
    let deg = p.degree().unwrap_or(0) as i32;
    (0..5).all(|k| {
        let mut x = base.clone();
        for (j, b) in basis.iter().enumerate() {
            let t = 0.37 + 0.61 * k as f64 - 0.29 * j as f64;
            x.iter_mut().zip(b).for_each(|(xi, bi)| *xi += t * bi);
        }
        p.evaluate(&x).abs() <= 1e-8 * scale * norm(&x).max(1.0).powi(deg)
    })
}

/// Tangent hyperplanes of `{p = 0}` at zeros reached by Newton projection
/// from seeded random starts, with near-rational data snapped.
fn gradient_candidates(p: &Polynomial) -> Vec<Hyperplane> {
    let n = p.dimension();
    let pf = p.to_float();
    let grads: Vec<FloatPolynomial> = (0..n).map(|i| p.partial(i).to_float()).collect();
    let scale = pf.max_abs_coefficient();
    let deg = p.degree().unwrap_or(0) as i32;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out: Vec<Hyperplane> = Vec::new();
    for _ in 0..SEEDS {
        let mut x: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let mut converged = false;
        for _ in 0..100 {
            let v = pf.evaluate(&x);
            let g: Vec<f64> = grads.iter().map(|d| d.evaluate(&x)).collect();
            let g2 = dot(&g, &g);
            if g2 == 0.0 || !g2.is_finite() {
                break;
            }
            let step = v / g2;
            x.iter_mut().zip(&g).for_each(|(xi, gi)| *xi -= step * gi);
            if (step * g2.sqrt()).abs() <= 1e-15 * norm(&x).max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged || norm(&x) > 1e3 {
            continue;
        }
        if pf.evaluate(&x).abs() > 1e-10 * scale * norm(&x).max(1.0).powi(deg) {
            continue;
        }
        let g: Vec<f64> = grads.iter().map(|d| d.evaluate(&x)).collect();
        let gn = norm(&g);
        if gn <= 1e-8 * scale * norm(&x).max(1.0).powi(deg - 1) {
            continue;
        }
        let normal: Vec<f64> = g.iter().map(|v| v / gn).collect();
        let offset = dot(&normal, &x);
        if let Ok(h) = snapped(&normal, offset) {
            if !out.iter().any(|o| o.approx_eq(&h, 1e-7)) {
                out.push(h);
            }
        }
    }
    out
}

fn snapped(normal: &[f64], offset: f64) -> Result<Hyperplane, crate::geometry::GeometryError> {
    let h = Hyperplane::new(normal.to_vec(), offset)?;
    let normal: Vec<f64> = match h.normal().iter().map(|v| rationalize(*v)).collect::<Option<Vec<_>>>() {
        Some(q) => q.iter().map(crate::polyalg::rational_to_f64).collect(),
        None => h.normal().to_vec(),
    };
    let offset = rationalize(h.offset()).map_or(h.offset(), |q| crate::polyalg::rational_to_f64(&q));
    Hyperplane::new(normal, offset)
}
