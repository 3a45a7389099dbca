//! Serialize rationals as `"p/q"` strings so reports stay exact.

use serde::{Deserialize, Deserializer, Serializer};

use crate::exact::{format_rational, parse_rational, Rational};

pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
    let s = String::deserialize(d)?;
    parse_rational(&s).map_err(serde::de::Error::custom)
}
