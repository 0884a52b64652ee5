//! Explicit solutions of `u_tt = Δu`, `u(·,0) = 0`, `u_t(·,0) = f∗φ`.
//!
//! * n = 3 (Kirchhoff): `u(x, t) = t·M(x, t)`.
//! * n = 2 (Poisson): `u(x, t) = (1/2π)∫_{|y−x|<t} F(y)/√(t² − |y−x|²) dy`,
//!   which after `ρ = t·sin ψ` becomes `t∫_0^{π/2} sin ψ · M(x, t sin ψ) dψ`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::quadrature::gauss_legendre;
use super::{probe_box, MollifiedField, OracleError, RadialMollifier, DEFAULT_QUAD_ORDER, REFERENCE_PROBES};
use crate::coxeter::FiniteDistribution;

const PANEL_NODES: usize = 16;

impl MollifiedField {
    /// `u(x, t)` with angular order `quad_order`.
    pub fn wave(&self, x: &[f64], t: f64, quad_order: usize) -> Result<f64, OracleError> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(OracleError::InvalidTime(t));
        }
        match self.dimension() {
            3 => Ok(t * self.sphere_mean(x, t, quad_order)?),
            2 => {
                // Panels fine enough to resolve features of width w in ρ.
                let w = self.mollifier().width();
                let base = (t / (4.0 * w)).ceil() + 4.0;
                let panels = (base * quad_order as f64 / DEFAULT_QUAD_ORDER as f64).ceil().max(1.0) as usize;
                let gl = gauss_legendre(PANEL_NODES);
                let h = std::f64::consts::FRAC_PI_2 / panels as f64;
                let mut total = 0.0;
                for k in 0..panels {
                    let (a, b) = (k as f64 * h, (k + 1) as f64 * h);
                    let mut err = None;
                    total += gl.integrate(a, b, |psi| {
                        let s = psi.sin();
                        match self.sphere_mean(x, t * s, quad_order) {
                            Ok(m) => s * m,
                            Err(e) => {
                                err.get_or_insert(e);
                                0.0
                            }
                        }
                    });
                    if let Some(e) = err {
                        return Err(e);
                    }
                }
                Ok(t * total)
            }
            n => Err(OracleError::UnsupportedDimension(n)),
        }
    }
}

/// `u(x, t)` for velocity `f∗φ` at the default order.
pub fn wave_eval(f: &FiniteDistribution, phi: &RadialMollifier, x: &[f64], t: f64) -> Result<f64, OracleError> {
    MollifiedField::new(f, phi)?.wave(x, t, DEFAULT_QUAD_ORDER)
}

/// `u(x, t)` at each time, evaluated in parallel.
pub fn wave_series(
    f: &FiniteDistribution,
    phi: &RadialMollifier,
    x: &[f64],
    times: &[f64],
    quad_order: usize,
) -> Result<Vec<f64>, OracleError> {
    let field = MollifiedField::new(f, phi)?;
    times.par_iter().map(|&t| field.wave(x, t, quad_order)).collect()
}

/// Median over seeded probes of `max_t |u(x, t)|`, the scale against which
/// vanishing of `u` is judged.
pub fn wave_reference_scale(
    f: &FiniteDistribution,
    phi: &RadialMollifier,
    times: &[f64],
    quad_order: usize,
    seed: u64,
) -> Result<f64, OracleError> {
    let field = MollifiedField::new(f, phi)?;
    let bx = probe_box(f);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5741_5645);
    let probes: Vec<Vec<f64>> = (0..REFERENCE_PROBES).map(|_| bx.random_point(&mut rng)).collect();
    let mut values = probes
        .par_iter()
        .map(|x| {
            times
                .iter()
                .map(|&t| field.wave(x, t, quad_order).map(f64::abs))
                .try_fold(0.0f64, |m, v| v.map(|v| m.max(v)))
        })
        .collect::<Result<Vec<f64>, _>>()?;
    values.sort_by(f64::total_cmp);
    let m = values.len() / 2;
    Ok(0.5 * (values[m - 1] + values[m]))
}
