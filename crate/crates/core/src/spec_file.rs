//! JSON map-specification files and their validation into oracle handles.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fab::fab_spec;
use crate::linalg::IntMatrix;
use crate::matinv::{build_i, build_j, build_k, k_handle, Family, SYMBOLIC_Q_MAX};
use crate::monomial::{projectivize, MonomialMap};
use crate::oracle::{MapHandle, RationalMapSpec};
use crate::poly::{Domain, MonoSumPoly, PrimeField, Term};

/// `"Z"` or `{"prime": "<decimal>"}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FieldSpec {
    #[default]
    Integer,
    Prime(u64),
}

impl FieldSpec {
    pub fn domain(self) -> Domain {
        match self {
            FieldSpec::Integer => Domain::Integer,
            FieldSpec::Prime(p) => Domain::Prime(p),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum FieldRepr {
    Named(String),
    Prime {
        #[serde(with = "crate::json::u64_string")]
        prime: u64,
    },
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            FieldSpec::Integer => FieldRepr::Named("Z".into()),
            FieldSpec::Prime(prime) => FieldRepr::Prime { prime },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match FieldRepr::deserialize(d)? {
            FieldRepr::Named(s) if s == "Z" => Ok(FieldSpec::Integer),
            FieldRepr::Named(s) => Err(serde::de::Error::custom(format!(
                "unknown field {s:?}; expected \"Z\" or {{\"prime\": ...}}"
            ))),
            FieldRepr::Prime { prime } => Ok(FieldSpec::Prime(prime)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BuildMode {
    /// Symbolic when `q <= SYMBOLIC_Q_MAX`, the composed handle otherwise.
    #[default]
    Auto,
    Symbolic,
    Oracle,
}

/// A map-specification document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum MapSpecFile {
    Explicit {
        #[serde(default)]
        field: FieldSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
        components: Vec<Vec<Term>>,
    },
    Monomial {
        matrix: IntMatrix,
    },
    Matinv {
        q: usize,
        which: Family,
        #[serde(default)]
        mode: BuildMode,
    },
    Fab {
        #[serde(with = "bigint_str")]
        a: BigInt,
        #[serde(with = "bigint_str")]
        b: BigInt,
        field: FieldSpec,
    },
}

mod bigint_str {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::json::ser_bigint(v, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        crate::json::de_bigint(d)
    }
}

/// The validated map together with anything that was adjusted on the way.
#[derive(Debug, Clone)]
pub struct ValidatedMap {
    pub handle: MapHandle,
    /// The expanded tuple, absent for composed handles.
    pub spec: Option<RationalMapSpec>,
    pub warnings: Vec<String>,
}

pub fn parse_spec(text: &str) -> Result<MapSpecFile> {
    serde_json::from_str(text).map_err(|e| Error::Invalid(format!("map spec: {e}")))
}

impl MapSpecFile {
    /// Coefficients as decimal strings, terms in descending graded-lex order, zero
    /// coefficients dropped.
    pub fn canonical(&self) -> Result<MapSpecFile> {
        Ok(match self {
            MapSpecFile::Explicit {
                field,
                label,
                components,
            } => {
                let n = components.len();
                let comps = components
                    .iter()
                    .map(|c| Ok(MonoSumPoly::from_terms(n, field.domain(), c)?.to_terms()))
                    .collect::<Result<Vec<_>>>()?;
                MapSpecFile::Explicit {
                    field: *field,
                    label: label.clone(),
                    components: comps,
                }
            }
            other => other.clone(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("map spec serializes")
    }
}

fn residue(x: &BigInt, p: u64) -> u64 {
    let p = BigInt::from(p);
    (((x % &p) + &p) % &p).to_u64().expect("reduced residue")
}

/// Checks the document and builds the oracle handle.
pub fn validate_spec(file: &MapSpecFile) -> Result<ValidatedMap> {
    let mut warnings = Vec::new();
    let spec = match file {
        MapSpecFile::Explicit {
            field,
            label,
            components,
        } => {
            if let FieldSpec::Prime(p) = field {
                PrimeField::new(*p)?;
            }
            let n = components.len();
            for (i, c) in components.iter().enumerate() {
                if let Some(t) = c.iter().find(|t| t.exponents.len() != n) {
                    return Err(Error::Invalid(format!(
                        "component {i}: exponent vector of length {} in a map with {n} components",
                        t.exponents.len()
                    )));
                }
            }
            let polys = components
                .iter()
                .map(|c| MonoSumPoly::from_terms(n, field.domain(), c))
                .collect::<Result<Vec<_>>>()?;
            let label = label.clone().unwrap_or_else(|| "explicit".into());
            let (spec, extracted) = RationalMapSpec::normalized(polys, label)?;
            if extracted.iter().any(|&e| e > 0) {
                warnings.push(format!(
                    "divided out the common monomial with exponents {extracted:?}"
                ));
            }
            Some(spec)
        }
        MapSpecFile::Monomial { matrix } => Some(projectivize(&MonomialMap::new(matrix.clone())?)?),
        MapSpecFile::Matinv { q, which, mode } => match (which, mode) {
            (Family::J, _) => Some(build_j(*q)?.spec),
            (Family::I, _) => Some(build_i(*q)?.spec),
            (Family::K, BuildMode::Symbolic) => Some(build_k(*q)?.spec),
            (Family::K, BuildMode::Auto) if *q <= SYMBOLIC_Q_MAX => Some(build_k(*q)?.spec),
            (Family::K, _) => None,
        },
        MapSpecFile::Fab { a, b, field } => {
            let FieldSpec::Prime(p) = field else {
                return Err(Error::Invalid("fab maps need a prime field".into()));
            };
            PrimeField::new(*p)?;
            Some(fab_spec(residue(a, *p), residue(b, *p), *p)?)
        }
    };
    let handle = match (&spec, file) {
        (Some(s), _) => MapHandle::from(s.clone()),
        (None, MapSpecFile::Matinv { q, .. }) => k_handle(*q)?,
        (None, _) => unreachable!("only K may skip symbolic expansion"),
    };
    Ok(ValidatedMap {
        handle,
        spec,
        warnings,
    })
}
