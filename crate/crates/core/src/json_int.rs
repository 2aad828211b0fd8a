//! JSON encoding for big integers: a plain number when it fits in `i64`,
//! otherwise a decimal string. Both forms are accepted on input.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serializer};

pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(small) => s.serialize_i64(small),
        None => s.serialize_str(&v.to_string()),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Repr {
    Int(i64),
    Text(String),
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    match Repr::deserialize(d)? {
        Repr::Int(v) => Ok(BigInt::from(v)),
        Repr::Text(s) => s.parse().map_err(D::Error::custom),
    }
}
