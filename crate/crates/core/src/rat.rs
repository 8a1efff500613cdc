//! Small helpers around exact rationals.

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number used for q-exponents, shifts and pairings.
pub type Q = Rational64;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub fn int(n: i64) -> Q {
    Q::from_integer(n)
}

pub fn floor(x: Q) -> i64 {
    x.floor().to_integer()
}

pub fn is_integer(x: Q) -> bool {
    x.is_integer()
}

/// Converts a rational with denominator dividing 2 into doubled-integer form.
pub fn to_doubled(x: Q) -> Result<i64> {
    let d = x * int(2);
    if d.is_integer() {
        Ok(d.to_integer())
    } else {
        Err(Error::NotHalfInteger(format_q(x)))
    }
}

pub fn from_doubled(d: i64) -> Q {
    Q::new(d, 2)
}

pub fn format_q(x: Q) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(int(s.parse().map_err(|_| bad())?)),
    }
}

/// Parses a comma separated list such as `0,1/2,-3/2`.
pub fn parse_q_list(s: &str) -> Result<Vec<Q>> {
    s.split(',').map(parse_q).collect()
}

pub fn lcm_of_denominators(values: &[Q]) -> i64 {
    values.iter().fold(1i64, |acc, v| acc.lcm(v.denom()))
}

pub fn to_f64(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

pub fn sign(x: Q) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Serde adapter writing rationals as `"p/q"` strings and accepting either
/// strings or JSON integers.
pub mod serde_q {
    use super::{format_q, parse_q, Q};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(*x))
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Int(i64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(Q::from_integer(n)),
            Raw::Str(s) => parse_q(&s).map_err(de::Error::custom),
        }
    }

    pub fn from_value(v: &serde_json::Value) -> crate::Result<Q> {
        match v {
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(Q::from_integer)
                .ok_or_else(|| crate::Error::Parse(format!("not an integer: {n}"))),
            serde_json::Value::String(s) => parse_q(s),
            other => Err(crate::Error::Parse(format!("not a rational: {other}"))),
        }
    }
}

/// [`serde_q`] for vectors.
pub mod serde_q_vec {
    use super::{format_q, Q};
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&format_q(*x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        #[derive(Deserialize)]
        struct W(#[serde(with = "super::serde_q")] Q);
        Ok(Vec::<W>::deserialize(d)?.into_iter().map(|W(x)| x).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("-3/2").unwrap(), q(-3, 2));
        assert_eq!(parse_q("4/2").unwrap(), int(2));
        assert_eq!(format_q(q(6, 4)), "3/2");
        assert_eq!(format_q(int(-7)), "-7");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn floors_of_negative_fractions() {
        assert_eq!(floor(q(-1, 2)), -1);
        assert_eq!(floor(q(-3, 2)), -2);
        assert_eq!(floor(q(5, 3)), 1);
    }

    #[test]
    fn doubled_form_rejects_thirds() {
        assert_eq!(to_doubled(q(-3, 2)).unwrap(), -3);
        assert!(to_doubled(q(1, 3)).is_err());
    }
}
