//! Design files: `{"n":2,"points":[["3/5","4/5"],...],"multiplicities":[...]}`.
//!
//! Points given entirely as `"p/q"` strings load as a [`RationalDesign`];
//! otherwise the file is a floating [`Design`] whose weights come from
//! `weights` or from normalized multiplicities.

use std::path::Path;

use nalgebra::DVector;
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{Design, RationalDesign};
use crate::error::{Error, Result};
use crate::exact::{format_rational, JsonScalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignFile {
    pub n: usize,
    pub points: Vec<Vec<JsonScalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicities: Option<Vec<Count>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

/// Multiplicity: a JSON integer, or a decimal string when it exceeds `u64`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Count {
    Small(u64),
    Big(String),
}

impl Count {
    fn value(&self) -> Result<BigUint> {
        match self {
            Count::Small(v) => Ok(BigUint::from(*v)),
            Count::Big(s) => s.trim().parse().map_err(|_| Error::Parse(format!("bad multiplicity {s:?}"))),
        }
    }

    fn from_big(v: &BigUint) -> Self {
        match v.to_u64() {
            Some(x) => Count::Small(x),
            None => Count::Big(v.to_string()),
        }
    }
}

impl DesignFile {
    pub fn from_json_str(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("design file serializes")
    }

    pub fn is_exact(&self) -> bool {
        !self.points.is_empty() && self.points.iter().flatten().all(|x| matches!(x, JsonScalar::Exact(_)))
    }

    fn counts(&self) -> Result<Option<Vec<BigUint>>> {
        self.multiplicities
            .as_ref()
            .map(|m| m.iter().map(Count::value).collect())
            .transpose()
    }

    pub fn to_rational(&self) -> Result<RationalDesign> {
        if !self.is_exact() {
            return Err(Error::Parse("rational designs need every coordinate as a \"p/q\" string".into()));
        }
        let points = self
            .points
            .iter()
            .map(|p| p.iter().map(|x| x.exact().map(Option::unwrap)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let mult = self.counts()?.unwrap_or_else(|| vec![BigUint::from(1u8); points.len()]);
        RationalDesign::new(self.n, points, mult)
    }

    pub fn to_design(&self) -> Result<Design> {
        if self.is_exact() {
            return self.to_rational()?.to_design();
        }
        let points: Vec<DVector<f64>> = self
            .points
            .iter()
            .map(|p| p.iter().map(JsonScalar::value).collect::<Result<Vec<f64>>>().map(DVector::from_vec))
            .collect::<Result<_>>()?;
        let weights = match (&self.weights, self.counts()?) {
            (Some(w), _) => w.clone(),
            (None, Some(m)) => {
                let total: BigUint = m.iter().sum();
                if total.is_zero() {
                    return Err(Error::InvalidParameter("multiplicities sum to zero".into()));
                }
                let t = total.to_f64().unwrap_or(f64::INFINITY);
                m.iter().map(|c| c.to_f64().unwrap_or(0.0) / t).collect()
            }
            (None, None) => vec![1.0 / points.len().max(1) as f64; points.len()],
        };
        Design::with_weights(self.n, points, weights)
    }

    pub fn from_design(d: &Design) -> Self {
        let uniform = d.is_uniform();
        DesignFile {
            n: d.n,
            points: d.points.iter().map(|p| p.iter().map(|x| JsonScalar::Float(*x)).collect()).collect(),
            multiplicities: None,
            weights: if uniform { None } else { Some(d.weights.clone()) },
        }
    }

    pub fn from_rational(d: &RationalDesign) -> Self {
        DesignFile {
            n: d.n,
            points: d
                .points
                .iter()
                .map(|p| p.iter().map(|x| JsonScalar::Exact(format_rational(x))).collect())
                .collect(),
            multiplicities: Some(d.multiplicities.iter().map(Count::from_big).collect()),
            weights: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::{hilbert_rational_design, is_degree4_design, HilbertOptions};

    #[test]
    fn rational_round_trip() {
        let h = hilbert_rational_design(2, &HilbertOptions::default()).unwrap();
        let text = DesignFile::from_rational(&h.design).to_json_string();
        let back = DesignFile::from_json_str(&text).unwrap();
        assert!(back.is_exact());
        assert_eq!(back.to_rational().unwrap(), h.design);
        assert!(is_degree4_design(&back.to_design().unwrap(), 1e-14).unwrap().ok);
    }

    #[test]
    fn float_file_with_multiplicities() {
        let text = r#"{"n":2,"points":[[1,0],[0,1],[-1,0],[0,-1]],"multiplicities":[1,1,1,1]}"#;
        let d = DesignFile::from_json_str(text).unwrap().to_design().unwrap();
        assert_eq!(d.weights, vec![0.25; 4]);
    }

    #[test]
    fn big_multiplicities_are_strings() {
        let c = Count::from_big(&(BigUint::from(u64::MAX) * 3u8));
        assert!(matches!(c, Count::Big(_)));
        assert_eq!(c.value().unwrap(), BigUint::from(u64::MAX) * 3u8);
    }

    #[test]
    fn rejects_mixed_rational_design() {
        let text = r#"{"n":2,"points":[["3/5",0.8]]}"#;
        let f = DesignFile::from_json_str(text).unwrap();
        assert!(f.to_rational().is_err());
        assert!(f.to_design().is_ok());
        assert!(DesignFile::from_json_str(r#"{"n":2,"pts":[]}"#).is_err());
    }
}
