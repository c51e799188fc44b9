//! Serde helpers for arbitrary-precision integers carried as decimal strings.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serializer};

/// Accepts either a decimal string or a bare JSON integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigIntRepr(pub BigInt);

impl<'de> Deserialize<'de> for BigIntRepr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = BigIntRepr;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("an integer or a decimal string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigIntRepr, E> {
                Ok(BigIntRepr(v.into()))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigIntRepr, E> {
                Ok(BigIntRepr(v.into()))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<BigIntRepr, E> {
                BigInt::from_str(v.trim())
                    .map(BigIntRepr)
                    .map_err(|_| E::custom(format!("malformed integer {v:?}")))
            }
        }
        d.deserialize_any(V)
    }
}

pub fn ser_bigint<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn de_bigint<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    BigIntRepr::deserialize(d).map(|r| r.0)
}

pub fn ser_bigint_vec<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

pub fn de_bigint_vec<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
    let v: Vec<BigIntRepr> = Vec::deserialize(d)?;
    Ok(v.into_iter().map(|r| r.0).collect())
}

/// `u64` carried as a decimal string (primes near 2^61 exceed the 53-bit JSON range).
pub mod u64_string {
    use super::*;

    pub fn serialize<S: Serializer>(v: &u64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        let b = BigIntRepr::deserialize(d)?.0;
        u64::try_from(b).map_err(|_| de::Error::custom("integer out of u64 range"))
    }
}

pub mod u64_string_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[u64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u64>, D::Error> {
        let v: Vec<BigIntRepr> = Vec::deserialize(d)?;
        v.into_iter()
            .map(|b| u64::try_from(b.0).map_err(|_| de::Error::custom("integer out of u64 range")))
            .collect()
    }
}
