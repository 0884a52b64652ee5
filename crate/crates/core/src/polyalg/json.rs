//! Canonical JSON form:
//! `{"dimension": n, "terms": [{"exps": [e1, .., en], "coeff": "p/q"}]}`
//! with terms listed leading-first in graded-lex order.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::monomial::ExponentVector;
use super::Polynomial;
use crate::Rational;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermJson {
    exps: Vec<u32>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolynomialJson {
    dimension: usize,
    terms: Vec<TermJson>,
}

/// Serializes a rational as `p/q`, or `p` when the denominator is one.
pub fn rational_to_string(q: &Rational) -> String {
    q.to_string()
}

pub fn rational_from_str(s: &str) -> Result<Rational, String> {
    let q: Rational = s.trim().parse().map_err(|_| format!("invalid rational `{s}`"))?;
    Ok(q)
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PolynomialJson {
            dimension: self.dimension(),
            terms: self
                .terms()
                .rev()
                .map(|(e, c)| TermJson {
                    exps: e.exps().to_vec(),
                    coeff: rational_to_string(c),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = PolynomialJson::deserialize(deserializer)?;
        if raw.dimension == 0 {
            return Err(D::Error::custom("dimension must be positive"));
        }
        let mut seen = std::collections::BTreeSet::new();
        let mut terms = Vec::with_capacity(raw.terms.len());
        for t in raw.terms {
            if t.exps.len() != raw.dimension {
                return Err(D::Error::custom(format!(
                    "exponent vector {:?} has length {}, expected {}",
                    t.exps,
                    t.exps.len(),
                    raw.dimension
                )));
            }
            let c = rational_from_str(&t.coeff).map_err(D::Error::custom)?;
            if num_traits::Zero::is_zero(&c) {
                return Err(D::Error::custom(format!("zero coefficient for {:?}", t.exps)));
            }
            let e = ExponentVector::new(t.exps);
            if !seen.insert(e.clone()) {
                return Err(D::Error::custom(format!("duplicate monomial {:?}", e.exps())));
            }
            terms.push((e, c));
        }
        Polynomial::from_terms(raw.dimension, terms).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let p = Polynomial::parse(2, "x*y - 1/2").unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(
            s,
            r#"{"dimension":2,"terms":[{"exps":[1,1],"coeff":"1"},{"exps":[0,0],"coeff":"-1/2"}]}"#
        );
        let back: Polynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }

    #[test]
    fn strict_schema() {
        let bad = [
            r#"{"dimension":2,"terms":[{"exps":[1],"coeff":"1"}]}"#,
            r#"{"dimension":2,"terms":[{"exps":[1,0],"coeff":"0"}]}"#,
            r#"{"dimension":2,"terms":[{"exps":[1,0],"coeff":"1"},{"exps":[1,0],"coeff":"2"}]}"#,
            r#"{"dimension":2,"terms":[],"extra":1}"#,
            r#"{"dimension":2,"terms":[{"exps":[1,0],"coeff":"x"}]}"#,
        ];
        for b in bad {
            assert!(serde_json::from_str::<Polynomial>(b).is_err(), "{b}");
        }
    }
}
