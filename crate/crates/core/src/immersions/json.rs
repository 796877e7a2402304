use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{ImmersionSpec, TorusLinear};
use crate::error::{Error, Result};
use crate::exact::{format_rational, JsonScalar};

/// On-disk form of an [`ImmersionSpec`].
///
/// ```json
/// {"kind":"clifford_torus","N":4}
/// {"kind":"sphere_product","factors":[[1,0.6],[1,0.8]]}
/// {"kind":"torus_linear","rows":[["3/5","4/5"],[1,0]],"scale":1.414}
/// {"kind":"veronese","m":2}
/// {"kind":"tube","r":0.6667,"n1":1,"n2":1,"rho":0.3333}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpecJson {
    RoundSphere {
        n: usize,
        #[serde(rename = "R")]
        radius: f64,
    },
    SphereProduct {
        factors: Vec<(usize, f64)>,
    },
    CliffordTorus {
        #[serde(rename = "N")]
        factors: usize,
    },
    TorusLinear {
        rows: Vec<Vec<JsonScalar>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<Vec<JsonScalar>>,
    },
    Veronese {
        m: usize,
    },
    Tube {
        r: f64,
        n1: usize,
        n2: usize,
        rho: f64,
    },
}

impl TryFrom<SpecJson> for ImmersionSpec {
    type Error = Error;

    fn try_from(json: SpecJson) -> Result<Self> {
        let spec = match json {
            SpecJson::RoundSphere { n, radius } => ImmersionSpec::RoundSphere { n, radius },
            SpecJson::SphereProduct { factors } => ImmersionSpec::SphereProduct { factors },
            SpecJson::CliffordTorus { factors } => ImmersionSpec::CliffordTorus { factors },
            SpecJson::Veronese { m } => ImmersionSpec::Veronese { m },
            SpecJson::Tube { r, n1, n2, rho } => ImmersionSpec::TubeEncircle { base_radius: r, n1, n2, rho },
            SpecJson::TorusLinear { rows, scale, weights } => {
                let n = rows.first().map_or(0, Vec::len);
                if rows.iter().any(|r| r.len() != n) {
                    return Err(Error::Parse("torus rows have unequal lengths".into()));
                }
                let all_exact = rows.iter().flatten().all(|x| matches!(x, JsonScalar::Exact(_)));
                let exact_rows = if all_exact && !rows.is_empty() {
                    Some(
                        rows.iter()
                            .map(|r| r.iter().map(|x| x.exact().map(|v| v.unwrap())).collect::<Result<Vec<_>>>())
                            .collect::<Result<Vec<_>>>()?,
                    )
                } else {
                    None
                };
                let values: Vec<f64> =
                    rows.iter().flatten().map(JsonScalar::value).collect::<Result<_>>()?;
                let mut torus = TorusLinear::new(DMatrix::from_row_slice(rows.len(), n, &values));
                torus.exact_rows = exact_rows;
                if let Some(s) = scale {
                    torus.scale = s;
                }
                if let Some(w) = weights {
                    torus.weights = Some(w.iter().map(JsonScalar::value).collect::<Result<_>>()?);
                }
                ImmersionSpec::TorusLinear(torus)
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl From<&ImmersionSpec> for SpecJson {
    fn from(spec: &ImmersionSpec) -> Self {
        match spec {
            ImmersionSpec::RoundSphere { n, radius } => SpecJson::RoundSphere { n: *n, radius: *radius },
            ImmersionSpec::SphereProduct { factors } => SpecJson::SphereProduct { factors: factors.clone() },
            ImmersionSpec::CliffordTorus { factors } => SpecJson::CliffordTorus { factors: *factors },
            ImmersionSpec::Veronese { m } => SpecJson::Veronese { m: *m },
            ImmersionSpec::TubeEncircle { base_radius, n1, n2, rho } => SpecJson::Tube {
                r: *base_radius,
                n1: *n1,
                n2: *n2,
                rho: *rho,
            },
            ImmersionSpec::TorusLinear(t) => {
                let rows = match &t.exact_rows {
                    Some(exact) => exact
                        .iter()
                        .map(|r| r.iter().map(|x| JsonScalar::Exact(format_rational(x))).collect())
                        .collect(),
                    None => t
                        .rows
                        .row_iter()
                        .map(|r| r.iter().map(|x| JsonScalar::Float(*x)).collect())
                        .collect(),
                };
                SpecJson::TorusLinear {
                    rows,
                    scale: Some(t.scale),
                    weights: t.weights.as_ref().map(|w| w.iter().map(|x| JsonScalar::Float(*x)).collect()),
                }
            }
        }
    }
}

impl ImmersionSpec {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let json: SpecJson = serde_json::from_str(text)?;
        json.try_into()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&SpecJson::from(self)).expect("spec serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::to_f64;

    /// Rows of an exact torus must agree with their floating images.
    fn exact_rows_consistent(t: &TorusLinear) -> bool {
        match &t.exact_rows {
            None => true,
            Some(exact) => exact.iter().enumerate().all(|(i, row)| {
                row.iter().enumerate().all(|(j, x)| (to_f64(x) - t.rows[(i, j)]).abs() < 1e-15)
            }),
        }
    }

    #[test]
    fn parses_documented_examples() {
        let cases = [
            (r#"{"kind":"clifford_torus","N":4}"#, ImmersionSpec::clifford(4)),
            (
                r#"{"kind":"sphere_product","factors":[[1,0.6],[1,0.8]]}"#,
                ImmersionSpec::SphereProduct { factors: vec![(1, 0.6), (1, 0.8)] },
            ),
            (r#"{"kind":"veronese","m":2}"#, ImmersionSpec::veronese(2)),
            (
                r#"{"kind":"tube","r":0.6667,"n1":1,"n2":1,"rho":0.3333}"#,
                ImmersionSpec::tube(0.6667, 1, 1, 0.3333),
            ),
            (r#"{"kind":"round_sphere","n":2,"R":0.5}"#, ImmersionSpec::sphere(2, 0.5)),
        ];
        for (text, expected) in cases {
            let spec = ImmersionSpec::from_json_str(text).unwrap();
            assert_eq!(spec, expected);
            assert_eq!(ImmersionSpec::from_json_str(&spec.to_json_string()).unwrap(), expected);
        }
    }

    #[test]
    fn exact_torus_rows_survive_round_trip() {
        let text = r#"{"kind":"torus_linear","rows":[["3/5","4/5"],["1","0"],["0","-1"]]}"#;
        let spec = ImmersionSpec::from_json_str(text).unwrap();
        let ImmersionSpec::TorusLinear(t) = &spec else { panic!() };
        assert!(t.exact_rows.is_some());
        assert!(exact_rows_consistent(t));
        assert!((t.scale - 2f64.sqrt()).abs() < 1e-15);
        let again = ImmersionSpec::from_json_str(&spec.to_json_string()).unwrap();
        assert_eq!(again, spec);
    }

    #[test]
    fn rejects_unknown_kind_and_invalid_values() {
        assert!(ImmersionSpec::from_json_str(r#"{"kind":"klein_bottle"}"#).is_err());
        assert!(ImmersionSpec::from_json_str(r#"{"kind":"tube","r":0.5,"n1":1,"n2":1,"rho":0.6}"#).is_err());
        assert!(ImmersionSpec::from_json_str(r#"{"kind":"torus_linear","rows":[["1/2","1/2"]]}"#).is_err());
        assert!(ImmersionSpec::from_json_str(r#"{"kind":"veronese","m":2,"extra":1}"#).is_err());
    }
}
