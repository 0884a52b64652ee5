//! Mollified distributions and their spherical means.
//!
//! A source `G(∂)δ_y` mollified by `φ` is the function `z ↦ (G(−∂)φ)(z − y)`.
//! Both mollifiers have closed-form derivatives:
//!
//! * Gaussian: `φ(w)·H(w)` with `H` a combination of products of
//!   probabilists' Hermite polynomials;
//! * bump: writing `φ(w) = c·F(|w|²/2)`, each homogeneous part `P` of degree
//!   `k` gives `P(∂)φ(w) = c·Σ_j (ΔʲP)(w)/(2ʲ j!)·F^{(k−j)}(|w|²/2)`, and
//!   `F^{(m)}(s) = (2/ε²)^m·P_m(v)·e^{−v}` with `v = 1/(1 − 2s/ε²)`.
//!
//! Spherical means are computed source by source with rules aligned to the
//! direction of the source, so that the peak of the integrand is resolved
//! and mirror-symmetric configurations cancel to rounding.

use std::f64::consts::PI;
use std::sync::OnceLock;

use super::mollifier::{MollifierKind, RadialMollifier};
use super::quadrature::gauss_legendre;
use super::OracleError;
use crate::coxeter::FiniteDistribution;
use crate::polyalg::{ExponentVector, FloatPolynomial};

/// Largest total derivative order accepted for the bump.
pub const MAX_BUMP_DERIVATIVE_ORDER: u32 = 8;

/// Radii farther than this many `σ` from a Gaussian source see nothing of it.
const GAUSSIAN_REACH: f64 = 12.0;

#[derive(Clone, Debug)]
enum Profile {
    /// `(α, c_α σ^{−|α|})` and the largest exponent per axis.
    Hermite { coeffs: Vec<(Vec<u32>, f64)>, max_exp: Vec<u32> },
    /// `(Q, m)` contributing `Q(w)·F^{(m)}(|w|²/2)`.
    Bump { parts: Vec<(FloatPolynomial, u32)> },
}

#[derive(Clone, Debug)]
struct Term {
    center: Vec<f64>,
    degree: u32,
    profile: Profile,
}

/// `P_m` in `F^{(m)} = c^m·P_m(v)·e^{−v}`, coefficients in ascending powers.
fn bump_derivative_polys() -> &'static [Vec<f64>] {
    static POLYS: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    POLYS.get_or_init(|| {
        let mut out = vec![vec![1.0]];
        for m in 0..MAX_BUMP_DERIVATIVE_ORDER as usize {
            // P_{m+1}(v) = v²·(P_m'(v) − P_m(v)).
            let p = &out[m];
            let mut next = vec![0.0; p.len() + 2];
            for (i, c) in p.iter().enumerate() {
                next[i + 2] -= c;
                if i > 0 {
                    next[i + 1] += i as f64 * c;
                }
            }
            out.push(next);
        }
        out
    })
}

/// `F^{(m)}(s)` for `m ≤ max_m`, with `F(s) = exp(−1/(1 − 2s/ε²))`.
fn bump_derivatives(s: f64, epsilon: f64, max_m: u32, out: &mut Vec<f64>) {
    out.clear();
    let c = 2.0 / (epsilon * epsilon);
    let u = 1.0 - c * s;
    if u <= 0.0 {
        out.resize(max_m as usize + 1, 0.0);
        return;
    }
    let v = 1.0 / u;
    let e = (-v).exp();
    let mut cm = 1.0;
    for p in &bump_derivative_polys()[..=max_m as usize] {
        let val = p.iter().rev().fold(0.0, |acc, k| acc * v + k);
        out.push(cm * val * e);
        cm *= c;
    }
}

fn float_laplacian(p: &FloatPolynomial) -> FloatPolynomial {
    let n = p.dimension();
    let mut terms = Vec::new();
    for (e, c) in p.terms() {
        for i in 0..n {
            let k = e.get(i);
            if k >= 2 {
                let mut exps = e.exps().to_vec();
                exps[i] -= 2;
                terms.push((ExponentVector::new(exps), c * (k * (k - 1)) as f64));
            }
        }
    }
    FloatPolynomial::from_terms(n, terms)
}

impl Term {
    /// `H(w) = Σ_α c_α σ^{−|α|} Π_i He_{α_i}(w_i/σ)`.
    fn hermite(&self, w: &[f64], sigma: f64, table: &mut [Vec<f64>]) -> f64 {
        let Profile::Hermite { coeffs, max_exp } = &self.profile else {
            unreachable!("hermite factor of a bump term")
        };
        for (i, wi) in w.iter().enumerate() {
            let u = wi / sigma;
            let row = &mut table[i];
            row.clear();
            row.push(1.0);
            if max_exp[i] >= 1 {
                row.push(u);
            }
            for k in 2..=max_exp[i] as usize {
                let next = u * row[k - 1] - (k - 1) as f64 * row[k - 2];
                row.push(next);
            }
        }
        coeffs
            .iter()
            .map(|(alpha, c)| c * alpha.iter().enumerate().map(|(i, &a)| table[i][a as usize]).product::<f64>())
            .sum()
    }

    /// `Σ Q(w)·F^{(m)}(s)` with `s = |w|²/2` supplied by the caller.
    fn bump(&self, w: &[f64], s: f64, epsilon: f64, scratch: &mut Vec<f64>) -> f64 {
        let Profile::Bump { parts } = &self.profile else {
            unreachable!("bump factor of a Gaussian term")
        };
        bump_derivatives(s, epsilon, self.degree, scratch);
        if scratch[0] == 0.0 {
            return 0.0;
        }
        parts.iter().map(|(q, m)| q.evaluate(w) * scratch[*m as usize]).sum()
    }
}

/// `f∗φ` for a finite distribution `f` and a radial mollifier `φ`.
#[derive(Clone, Debug)]
pub struct MollifiedField {
    dimension: usize,
    mollifier: RadialMollifier,
    terms: Vec<Term>,
}

impl MollifiedField {
    pub fn new(f: &FiniteDistribution, mollifier: &RadialMollifier) -> Result<Self, OracleError> {
        let n = f.dimension();
        if mollifier.dimension() != n {
            return Err(OracleError::DimensionMismatch {
                expected: n,
                found: mollifier.dimension(),
            });
        }
        let mut terms = Vec::new();
        for s in f.support() {
            let w = s.weight.to_float();
            let degree = w.degree().unwrap_or(0);
            let profile = match mollifier.kind() {
                MollifierKind::Gaussian { sigma } => {
                    let mut max_exp = vec![0u32; n];
                    let coeffs = w
                        .terms()
                        .map(|(e, c)| {
                            for (m, &k) in max_exp.iter_mut().zip(e.exps()) {
                                *m = (*m).max(k);
                            }
                            (e.exps().to_vec(), c * sigma.powi(-(e.degree() as i32)))
                        })
                        .collect();
                    Profile::Hermite { coeffs, max_exp }
                }
                MollifierKind::Bump { .. } => {
                    if degree > MAX_BUMP_DERIVATIVE_ORDER {
                        return Err(OracleError::DerivativeOrderTooHigh(degree));
                    }
                    let mut parts = Vec::new();
                    for k in 0..=degree {
                        // Homogeneous part of degree k, with G(−∂) = G(−x)(∂).
                        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                        let mut p = FloatPolynomial::from_terms(
                            n,
                            w.terms().filter(|(e, _)| e.degree() == k).map(|(e, c)| (e.clone(), sign * c)),
                        );
                        let mut j = 0;
                        let mut factor = 1.0;
                        while p.degree().is_some() {
                            parts.push((p.scale(factor), k - j));
                            p = float_laplacian(&p);
                            j += 1;
                            factor /= 2.0 * j as f64;
                        }
                    }
                    Profile::Bump { parts }
                }
            };
            terms.push(Term {
                center: s.point.clone(),
                degree,
                profile,
            });
        }
        Ok(MollifiedField {
            dimension: n,
            mollifier: mollifier.clone(),
            terms,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn mollifier(&self) -> &RadialMollifier {
        &self.mollifier
    }

    /// Distance beyond which a sphere no longer meets a source's support
    /// (numerically, for the Gaussian).
    pub fn reach(&self) -> f64 {
        match self.mollifier.kind() {
            MollifierKind::Gaussian { sigma } => GAUSSIAN_REACH * sigma,
            MollifierKind::Bump { epsilon } => epsilon,
        }
    }

    /// `(f∗φ)(z)`.
    pub fn eval(&self, z: &[f64]) -> f64 {
        let mut table = vec![Vec::new(); self.dimension];
        let mut scratch = Vec::new();
        let c = self.mollifier.normalization();
        self.terms
            .iter()
            .map(|t| {
                let w: Vec<f64> = z.iter().zip(&t.center).map(|(a, b)| a - b).collect();
                match self.mollifier.kind() {
                    MollifierKind::Gaussian { sigma } => self.mollifier.eval(&w) * t.hermite(&w, sigma, &mut table),
                    MollifierKind::Bump { epsilon } => {
                        let s = 0.5 * w.iter().map(|v| v * v).sum::<f64>();
                        c * t.bump(&w, s, epsilon, &mut scratch)
                    }
                }
            })
            .sum()
    }

    /// Mean of `f∗φ` over the sphere `|z − x| = r` (normalized measure),
    /// with per-source adapted rules. `quad_order` scales every node count;
    /// 64 is the default.
    pub fn sphere_mean(&self, x: &[f64], r: f64, quad_order: usize) -> Result<f64, OracleError> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(OracleError::InvalidRadius(r));
        }
        if x.len() != self.dimension {
            return Err(OracleError::DimensionMismatch {
                expected: self.dimension,
                found: x.len(),
            });
        }
        if !(2..=3).contains(&self.dimension) {
            return Err(OracleError::UnsupportedDimension(self.dimension));
        }
        let q = quad_order.max(8);
        Ok(self
            .terms
            .iter()
            .map(|t| match (self.mollifier.kind(), self.dimension) {
                (MollifierKind::Gaussian { sigma }, 2) => self.gaussian_circle_mean(t, x, r, sigma, q),
                (MollifierKind::Gaussian { sigma }, _) => self.gaussian_sphere_mean(t, x, r, sigma, q),
                (MollifierKind::Bump { epsilon }, 2) => self.bump_circle_mean(t, x, r, epsilon, q),
                (MollifierKind::Bump { epsilon }, _) => self.bump_sphere_mean(t, x, r, epsilon, q),
            })
            .sum())
    }

    fn gaussian_circle_mean(&self, t: &Term, x: &[f64], r: f64, sigma: f64, q: usize) -> f64 {
        let (d, e) = direction(x, &t.center);
        if (r - d).abs() > GAUSSIAN_REACH * sigma {
            return 0.0;
        }
        let kappa = r * d / (sigma * sigma);
        let adaptive = (9.0 * kappa.sqrt() + 2.0 * t.degree as f64 + 16.0) * q as f64 / 64.0;
        let mut nodes = q.max(adaptive.ceil() as usize);
        nodes += nodes % 2;
        let perp = [-e[1], e[0]];
        let pre = self.mollifier.normalization() * (-(r - d) * (r - d) / (2.0 * sigma * sigma)).exp();
        let mut table = vec![Vec::new(); 2];
        let mut sum = 0.0;
        for j in 0..nodes {
            let psi = 2.0 * PI * j as f64 / nodes as f64;
            let (s, c) = psi.sin_cos();
            let half = (0.5 * psi).sin();
            let a = r * c - d;
            let b = r * s;
            let w = [a * e[0] + b * perp[0], a * e[1] + b * perp[1]];
            sum += (-2.0 * kappa * half * half).exp() * t.hermite(&w, sigma, &mut table);
        }
        pre * sum / nodes as f64
    }

    fn gaussian_sphere_mean(&self, t: &Term, x: &[f64], r: f64, sigma: f64, q: usize) -> f64 {
        let (d, e) = direction(x, &t.center);
        if (r - d).abs() > GAUSSIAN_REACH * sigma {
            return 0.0;
        }
        let kappa = r * d / (sigma * sigma);
        let s_max = if kappa > 30.0 { 60.0 / kappa } else { 2.0 };
        let pre = self.mollifier.normalization() * (-(r - d) * (r - d) / (2.0 * sigma * sigma)).exp();
        let mut table = vec![Vec::new(); 3];
        let cap = Cap::new(&e, r, d, t.degree, q);
        let integral = gauss_legendre(q).integrate(0.0, s_max, |s| {
            (-kappa * s).exp() * cap.azimuthal_mean(s, |w| t.hermite(w, sigma, &mut table))
        });
        0.5 * pre * integral
    }

    fn bump_circle_mean(&self, t: &Term, x: &[f64], r: f64, epsilon: f64, q: usize) -> f64 {
        let (d, e) = direction(x, &t.center);
        let room = epsilon * epsilon - (r - d) * (r - d);
        if room <= 0.0 {
            return 0.0;
        }
        // |w|² = (r − d)² + 4rd·sin²(ψ/2) < ε² on |ψ| < ψ_max.
        let psi_max = if 4.0 * r * d <= room {
            PI
        } else {
            2.0 * (room / (4.0 * r * d)).sqrt().asin()
        };
        let perp = [-e[1], e[0]];
        let mut scratch = Vec::new();
        let integral = gauss_legendre(2 * q).integrate(-psi_max, psi_max, |psi| {
            let (s, c) = psi.sin_cos();
            let half = (0.5 * psi).sin();
            let a = r * c - d;
            let b = r * s;
            let w = [a * e[0] + b * perp[0], a * e[1] + b * perp[1]];
            let s2 = 0.5 * ((r - d) * (r - d) + 4.0 * r * d * half * half);
            t.bump(&w, s2, epsilon, &mut scratch)
        });
        self.mollifier.normalization() * integral / (2.0 * PI)
    }

    fn bump_sphere_mean(&self, t: &Term, x: &[f64], r: f64, epsilon: f64, q: usize) -> f64 {
        let (d, e) = direction(x, &t.center);
        let room = epsilon * epsilon - (r - d) * (r - d);
        if room <= 0.0 {
            return 0.0;
        }
        // |w|² = (r − d)² + 2rd·s < ε² on s < s_max.
        let s_max = if 2.0 * r * d <= 0.5 * room { 2.0 } else { (room / (2.0 * r * d)).min(2.0) };
        let cap = Cap::new(&e, r, d, t.degree, q);
        let mut scratch = Vec::new();
        let integral = gauss_legendre(2 * q).integrate(0.0, s_max, |s| {
            let s2 = 0.5 * ((r - d) * (r - d) + 2.0 * r * d * s);
            cap.azimuthal_mean(s, |w| t.bump(w, s2, epsilon, &mut scratch))
        });
        0.5 * self.mollifier.normalization() * integral
    }

    /// Largest distance from `x` to a source point.
    pub fn max_source_distance(&self, x: &[f64]) -> f64 {
        self.source_distances(x).into_iter().fold(0.0, f64::max)
    }

    /// Distances from `x` to the source points.
    pub fn source_distances(&self, x: &[f64]) -> Vec<f64> {
        self.terms.iter().map(|t| crate::geometry::distance(&t.center, x)).collect()
    }
}

/// Parametrization of the sphere `S(x, r)` by `s = 1 − cos(polar angle)`
/// from the direction `e` of a source at distance `d`, and the azimuth.
/// The azimuthal rule is exact for the trigonometric polynomials that a
/// weight of degree `k` produces.
struct Cap {
    e: Vec<f64>,
    e1: [f64; 3],
    e2: [f64; 3],
    r: f64,
    d: f64,
    azimuth: Vec<(f64, f64)>,
}

impl Cap {
    fn new(e: &[f64], r: f64, d: f64, degree: u32, q: usize) -> Self {
        let (e1, e2) = frame(e);
        let n_az = ((2.0 * degree as f64 + 8.0) * q as f64 / 64.0).ceil().max(degree as f64 + 2.0) as usize;
        let azimuth = (0..n_az)
            .map(|k| {
                let (s, c) = (2.0 * PI * k as f64 / n_az as f64).sin_cos();
                (c, s)
            })
            .collect();
        Cap {
            e: e.to_vec(),
            e1,
            e2,
            r,
            d,
            azimuth,
        }
    }

    /// Mean over the azimuth of `g(z − y)` on the circle at parameter `s`.
    fn azimuthal_mean<G: FnMut(&[f64]) -> f64>(&self, s: f64, mut g: G) -> f64 {
        let axial = self.r * (1.0 - s) - self.d;
        let radial = self.r * (s * (2.0 - s)).max(0.0).sqrt();
        let mut w = [0.0; 3];
        let mut acc = 0.0;
        for &(ca, sa) in &self.azimuth {
            for i in 0..3 {
                w[i] = axial * self.e[i] + radial * (ca * self.e1[i] + sa * self.e2[i]);
            }
            acc += g(&w);
        }
        acc / self.azimuth.len() as f64
    }
}

/// Distance from `x` to `y` and the unit vector pointing from `x` to `y`
/// (an arbitrary axis when they coincide).
fn direction(x: &[f64], y: &[f64]) -> (f64, Vec<f64>) {
    let v: Vec<f64> = y.iter().zip(x).map(|(a, b)| a - b).collect();
    let d = crate::geometry::norm(&v);
    if d == 0.0 {
        let mut e = vec![0.0; x.len()];
        *e.last_mut().unwrap() = 1.0;
        (0.0, e)
    } else {
        (d, v.iter().map(|c| c / d).collect())
    }
}

/// Orthonormal pair completing the unit vector `e` in ℝ³.
fn frame(e: &[f64]) -> ([f64; 3], [f64; 3]) {
    let axis = (0..3).min_by(|&a, &b| e[a].abs().total_cmp(&e[b].abs())).unwrap();
    let mut u = [0.0; 3];
    u[axis] = 1.0;
    let c: f64 = (0..3).map(|i| u[i] * e[i]).sum();
    for i in 0..3 {
        u[i] -= c * e[i];
    }
    let len = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    u.iter_mut().for_each(|v| *v /= len);
    let w = [
        e[1] * u[2] - e[2] * u[1],
        e[2] * u[0] - e[0] * u[2],
        e[0] * u[1] - e[1] * u[0],
    ];
    (u, w)
}

/// Mean of `g` over the sphere `|z − x| = r` with a global product rule:
/// `quad_order` trapezoid nodes on the circle (n = 2), or `quad_order/2`
/// Gauss–Legendre nodes in the polar cosine times `quad_order` azimuthal
/// nodes (n = 3).
pub fn spherical_mean<G: Fn(&[f64]) -> f64>(g: G, x: &[f64], r: f64, quad_order: usize) -> Result<f64, OracleError> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(OracleError::InvalidRadius(r));
    }
    let q = quad_order.max(2);
    match x.len() {
        2 => Ok((0..q)
            .map(|k| {
                let (s, c) = (2.0 * PI * k as f64 / q as f64).sin_cos();
                g(&[x[0] + r * c, x[1] + r * s])
            })
            .sum::<f64>()
            / q as f64),
        3 => {
            let gl = gauss_legendre((q / 2).max(1));
            Ok(0.5
                * gl.integrate(-1.0, 1.0, |u| {
                    let st = (1.0 - u * u).max(0.0).sqrt();
                    (0..q)
                        .map(|k| {
                            let (s, c) = (2.0 * PI * k as f64 / q as f64).sin_cos();
                            g(&[x[0] + r * st * c, x[1] + r * st * s, x[2] + r * u])
                        })
                        .sum::<f64>()
                        / q as f64
                }))
        }
        n => Err(OracleError::UnsupportedDimension(n)),
    }
}
