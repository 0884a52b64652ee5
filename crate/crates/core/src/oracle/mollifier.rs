use serde::{Deserialize, Serialize};

use super::quadrature::gauss_legendre;
use super::OracleError;

/// Mollifier family and scale.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MollifierKind {
    Gaussian { sigma: f64 },
    Bump { epsilon: f64 },
}

/// A normalized radial mollifier on ℝⁿ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadialMollifier {
    kind: MollifierKind,
    dimension: usize,
    /// `c` in `φ(x) = c·profile(|x|)`.
    normalization: f64,
}

impl<'de> Deserialize<'de> for RadialMollifier {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            kind: MollifierKind,
            dimension: usize,
            #[allow(dead_code)]
            normalization: f64,
        }
        let raw = Raw::deserialize(d)?;
        RadialMollifier::new(raw.kind, raw.dimension).map_err(serde::de::Error::custom)
    }
}

/// Surface area of the unit sphere in ℝⁿ.
pub fn unit_sphere_area(n: usize) -> f64 {
    use std::f64::consts::PI;
    match n {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 2.0 * PI * unit_sphere_area(n - 2) / (n as f64 - 2.0),
    }
}

/// `exp(−1/(1 − u²))` on `|u| < 1`, zero outside.
pub(crate) fn bump_profile(u: f64) -> f64 {
    let t = 1.0 - u * u;
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

impl RadialMollifier {
    pub fn new(kind: MollifierKind, dimension: usize) -> Result<Self, OracleError> {
        let scale = match kind {
            MollifierKind::Gaussian { sigma } => sigma,
            MollifierKind::Bump { epsilon } => epsilon,
        };
        if !(scale > 0.0 && scale.is_finite()) || dimension == 0 {
            return Err(OracleError::InvalidConfig(format!("invalid mollifier {kind:?} in dimension {dimension}")));
        }
        let normalization = match kind {
            MollifierKind::Gaussian { sigma } => (2.0 * std::f64::consts::PI * sigma * sigma).powf(-(dimension as f64) / 2.0),
            MollifierKind::Bump { epsilon } => {
                1.0 / (unit_sphere_area(dimension) * epsilon.powi(dimension as i32) * bump_radial_integral(dimension, 256))
            }
        };
        Ok(RadialMollifier {
            kind,
            dimension,
            normalization,
        })
    }

    pub fn gaussian(sigma: f64, dimension: usize) -> Result<Self, OracleError> {
        Self::new(MollifierKind::Gaussian { sigma }, dimension)
    }

    pub fn bump(epsilon: f64, dimension: usize) -> Result<Self, OracleError> {
        Self::new(MollifierKind::Bump { epsilon }, dimension)
    }

    pub fn kind(&self) -> MollifierKind {
        self.kind
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// Comparable length scale: `σ` for the Gaussian and `ε/3` for the bump.
    pub fn width(&self) -> f64 {
        match self.kind {
            MollifierKind::Gaussian { sigma } => sigma,
            MollifierKind::Bump { epsilon } => epsilon / 3.0,
        }
    }

    /// `φ` as a function of `|x|`.
    pub fn radial(&self, rho: f64) -> f64 {
        match self.kind {
            MollifierKind::Gaussian { sigma } => self.normalization * (-rho * rho / (2.0 * sigma * sigma)).exp(),
            MollifierKind::Bump { epsilon } => self.normalization * bump_profile(rho / epsilon),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.radial(x.iter().map(|v| v * v).sum::<f64>().sqrt())
    }
}

/// `∫_0^1 exp(−1/(1 − u²)) u^{n−1} du`.
pub(crate) fn bump_radial_integral(n: usize, nodes: usize) -> f64 {
    gauss_legendre(nodes).integrate(0.0, 1.0, |u| bump_profile(u) * u.powi(n as i32 - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_normalization_converged() {
        for n in 1..=4 {
            let a = bump_radial_integral(n, 256);
            let b = bump_radial_integral(n, 512);
            assert!(((a - b) / b).abs() < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn mass_is_one() {
        // Radial integral of the normalized profile, independently refined.
        for n in [2, 3] {
            for (m, r_max) in [
                (RadialMollifier::gaussian(0.3, n).unwrap(), 0.3 * 12.0),
                (RadialMollifier::bump(0.7, n).unwrap(), 0.7),
            ] {
                let gl = gauss_legendre(400);
                let mass = unit_sphere_area(n) * gl.integrate(0.0, r_max, |r| m.radial(r) * r.powi(n as i32 - 1));
                assert!((mass - 1.0).abs() < 1e-10, "{m:?}: {mass}");
            }
        }
    }

    #[test]
    fn sphere_areas() {
        use std::f64::consts::PI;
        assert!((unit_sphere_area(3) - 4.0 * PI).abs() < 1e-14);
        assert!((unit_sphere_area(4) - 2.0 * PI * PI).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_scales() {
        assert!(RadialMollifier::gaussian(0.0, 2).is_err());
        assert!(RadialMollifier::bump(-1.0, 2).is_err());
        assert!(RadialMollifier::gaussian(f64::NAN, 2).is_err());
    }
}
