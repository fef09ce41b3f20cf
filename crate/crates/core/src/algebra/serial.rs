//! Canonical JSON form of series: terms sorted lexicographically by exponent
//! vector, coefficients as decimal numerator/denominator strings.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::mseries::MSeries;
use super::varset::VarSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exponents: Vec<u16>,
    pub numerator: String,
    pub denominator: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub vars: Vec<String>,
    pub order: u32,
    pub terms: Vec<TermJson>,
}

impl From<&MSeries> for SeriesJson {
    fn from(s: &MSeries) -> SeriesJson {
        SeriesJson {
            vars: s.vars().names().to_vec(),
            order: s.order(),
            terms: s
                .terms()
                .map(|(e, c)| TermJson {
                    exponents: e.to_vec(),
                    numerator: c.numer().to_string(),
                    denominator: c.denom().to_string(),
                })
                .collect(),
        }
    }
}

impl SeriesJson {
    pub fn to_series(&self) -> Result<MSeries, String> {
        let vars: Arc<VarSet> = VarSet::new(self.vars.clone(), self.order).map_err(|e| e.to_string())?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if t.exponents.len() != vars.len() {
                return Err("exponent vector length does not match variables".into());
            }
            let n: BigInt = t.numerator.parse().map_err(|_| format!("bad numerator `{}`", t.numerator))?;
            let d: BigInt = t.denominator.parse().map_err(|_| format!("bad denominator `{}`", t.denominator))?;
            if d == BigInt::from(0) {
                return Err("zero denominator".into());
            }
            terms.push((t.exponents.clone(), BigRational::new(n, d)));
        }
        Ok(MSeries::from_terms(&vars, terms))
    }
}

impl Serialize for MSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SeriesJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for MSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<MSeries, D::Error> {
        SeriesJson::deserialize(d)?.to_series().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let v = VarSet::hypermap(1, 1, 3);
        let t = MSeries::var(&v, 0);
        let s = &(&t * &MSeries::var(&v, 2)).scale(&BigRational::new(3.into(), 7.into())) - &t;
        let json = serde_json::to_string(&s).unwrap();
        let back: MSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        assert!(json.contains("\"numerator\":\"3\""));
    }
}
