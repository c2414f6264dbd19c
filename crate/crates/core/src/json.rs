//! Serde glue for the exact string form of scalars (`"num/den"`, the
//! denominator omitted when it is 1). Integers are also accepted on input.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::str::FromStr;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exactmath::{Polynomial, Scalar};

#[derive(Deserialize)]
#[serde(untagged)]
enum Literal {
    Text(String),
    Int(i64),
}

fn parse_literal<T: FromStr, E: serde::de::Error>(lit: Literal) -> Result<T, E> {
    let text = match lit {
        Literal::Text(s) => s,
        Literal::Int(n) => n.to_string(),
    };
    text.trim()
        .parse()
        .map_err(|_| E::custom(format!("invalid rational {text:?}")))
}

pub mod scalar {
    use super::*;

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T: FromStr, D: Deserializer<'de>>(d: D) -> Result<T, D::Error> {
        parse_literal(Literal::deserialize(d)?)
    }
}

pub mod scalar_map {
    use super::*;

    pub fn serialize<T: Display, S: Serializer>(
        v: &BTreeMap<String, T>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(v.len()))?;
        for (k, x) in v {
            map.serialize_entry(k, &x.to_string())?;
        }
        map.end()
    }

    pub fn deserialize<'de, T: FromStr, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<String, T>, D::Error> {
        BTreeMap::<String, Literal>::deserialize(d)?
            .into_iter()
            .map(|(k, lit)| Ok((k, parse_literal(lit)?)))
            .collect()
    }
}

/// Lowest degree first: `x^2 + 7x + 9` is `["9","7","1"]`.
impl<T: Scalar> Serialize for Polynomial<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs().len()))?;
        for c in self.coeffs() {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

impl<'de, T: Scalar> Deserialize<'de> for Polynomial<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let coeffs = Vec::<Literal>::deserialize(d)?
            .into_iter()
            .map(parse_literal)
            .collect::<Result<Vec<T>, D::Error>>()?;
        Ok(Polynomial::from_coeffs(coeffs))
    }
}
