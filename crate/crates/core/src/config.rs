//! Source configuration files.
//!
//! ```json
//! {
//!   "dimension": 2,
//!   "sources": [
//!     {"point": ["0", "0"],
//!      "weight": {"dimension": 2, "terms": [{"exps": [1, 1], "coeff": "1"}]}}
//!   ],
//!   "mollifier": {"kind": "gaussian", "sigma": 0.1},
//!   "seed": 3
//! }
//! ```
//!
//! Points are rational strings, weights use the polynomial JSON form, and
//! the oracle fields (`mollifier`, `quad_order`, `r_grid`, `tolerance`,
//! `seed`) are optional. Unknown fields are rejected.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coxeter::{FiniteDistribution, Source};
use crate::oracle::{MollifierKind, OracleOptions, RGrid};
use crate::polyalg::{rational_from_str, rational_to_string, Polynomial};
use crate::Rational;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("malformed configuration: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceEntry {
    pub point: Vec<String>,
    pub weight: Polynomial,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceConfigFile {
    pub dimension: usize,
    pub sources: Vec<SourceEntry>,
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

impl SourceConfigFile {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: SourceConfigFile = serde_json::from_str(text)?;
        cfg.distribution()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serializes")
    }

    /// Configuration for exact rational points and weights.
    pub fn from_sources(dimension: usize, sources: &[(Vec<Rational>, Polynomial)]) -> Self {
        SourceConfigFile {
            dimension,
            sources: sources
                .iter()
                .map(|(p, w)| SourceEntry {
                    point: p.iter().map(rational_to_string).collect(),
                    weight: w.clone(),
                })
                .collect(),
            mollifier: None,
            quad_order: None,
            r_grid: None,
            tolerance: None,
            seed: None,
        }
    }

    /// The exact points of each source.
    pub fn exact_points(&self) -> Result<Vec<Vec<Rational>>, ConfigError> {
        self.sources
            .iter()
            .map(|s| {
                if s.point.len() != self.dimension {
                    return Err(ConfigError::Invalid(format!(
                        "point {:?} has {} coordinates, expected {}",
                        s.point,
                        s.point.len(),
                        self.dimension
                    )));
                }
                s.point.iter().map(|c| rational_from_str(c).map_err(ConfigError::Invalid)).collect()
            })
            .collect()
    }

    pub fn distribution(&self) -> Result<FiniteDistribution, ConfigError> {
        let points = self.exact_points()?;
        let sources = points
            .iter()
            .zip(&self.sources)
            .map(|(p, s)| Source::new(p.iter().map(crate::polyalg::rational_to_f64).collect(), s.weight.clone()))
            .collect();
        FiniteDistribution::new(self.dimension, sources).map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn oracle_options(&self) -> OracleOptions {
        OracleOptions {
            mollifier: self.mollifier,
            quad_order: self.quad_order,
            r_grid: self.r_grid,
            tolerance: self.tolerance,
            seed: self.seed,
        }
    }
}
