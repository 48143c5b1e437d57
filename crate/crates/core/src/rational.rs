//! Exact rational radii and distances.
//!
//! Balls are open: `l < r`. Word lengths are integers, so membership in
//! `B(1, r)` reduces to `l <= ceil(r) - 1`.

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::Ratio<i64>;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(v)
}

/// Largest integer strictly below `r`.
pub fn max_below(r: &Rational) -> i64 {
    r.ceil().to_integer() - 1
}

/// Exact strict comparison of an integer length against a radius.
pub fn lt(len: u64, r: &Rational) -> bool {
    (len as i64) <= max_below(r)
}

pub fn require_positive(r: &Rational) -> Result<()> {
    if r.is_positive() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "radius must be positive, got {r}"
        )))
    }
}

/// Parses `"3"`, `"-2"`, `"7/2"`.
pub fn parse(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidInput(format!("not a rational number: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<i64>().map(int).map_err(|_| bad()),
        Some((n, d)) => {
            let n = n.trim().parse::<i64>().map_err(|_| bad())?;
            let d = d.trim().parse::<i64>().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
    }
}

pub fn floor_to_i64(r: &Rational) -> i64 {
    r.numer().div_floor(r.denom())
}

/// Serializes radii as `"7/2"` strings.
pub mod as_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// `Vec<Rational>` as strings.
pub mod vec_as_string {
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&r.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| super::parse(s).map_err(serde::de::Error::custom))
            .collect()
    }
}
