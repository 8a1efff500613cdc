//! Canonical text form `2 * a^1 - 1 * a^-1 * hbar^1/2` and the structured
//! JSON form `{"terms":[{"exp":{"a":"1"},"mult":2}]}`.

use std::fmt;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Character, Monomial, VariableSet};
use crate::error::{Error, Result};
use crate::rat::{self, Q};

pub(super) struct MonomialDisplay<'a> {
    pub m: &'a Monomial,
    pub vars: &'a VariableSet,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m.is_one() {
            return write!(f, "1");
        }
        for (i, (v, d)) in self.m.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            write!(f, "{}^{}", self.vars.name(v), rat::format_q(rat::from_doubled(d)))?;
        }
        Ok(())
    }
}

pub(super) struct CharacterDisplay<'a> {
    pub c: &'a Character,
    pub vars: &'a VariableSet,
}

impl fmt::Display for CharacterDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.c.terms().enumerate() {
            let mag = c.unsigned_abs();
            match (i, c < 0) {
                (0, false) => write!(f, "{mag}")?,
                (0, true) => write!(f, "-{mag}")?,
                (_, false) => write!(f, " + {mag}")?,
                (_, true) => write!(f, " - {mag}")?,
            }
            if !m.is_one() {
                write!(f, " * {}", m.display(self.vars))?;
            }
        }
        Ok(())
    }
}

impl Monomial {
    /// Parses `a^2 * hbar^-1/2`; a bare name means exponent 1, `1` is the
    /// empty monomial.
    pub fn parse(text: &str, vars: &VariableSet) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "1" {
            return Ok(Self::one());
        }
        let mut m = Self::one();
        for factor in compact.split('*') {
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => (n, rat::parse_q(e)?),
                None => (factor, rat::int(1)),
            };
            let v = vars
                .lookup(name)
                .ok_or_else(|| Error::Parse(format!("unknown variable {name:?}")))?;
            m.add_doubled(v, rat::to_doubled(exp)?);
        }
        Ok(m)
    }

    pub fn to_json(&self, vars: &VariableSet) -> MonomialJson {
        MonomialJson(self.iter().map(|(v, d)| (vars.name(v), rat::from_doubled(d))).collect())
    }

    pub fn from_json(json: &MonomialJson, vars: &VariableSet) -> Result<Self> {
        let mut m = Self::one();
        for (name, e) in &json.0 {
            let v = vars
                .lookup(name)
                .ok_or_else(|| Error::Parse(format!("unknown variable {name:?}")))?;
            m.add_doubled(v, rat::to_doubled(*e)?);
        }
        Ok(m)
    }
}

impl Character {
    /// Parses the canonical text form. Terms are separated by `+`/`-`; each
    /// term is an optional integer coefficient followed by `*`-separated
    /// factors.
    pub fn parse(text: &str, vars: &VariableSet) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty character".into()));
        }
        if compact == "0" {
            return Ok(Self::zero());
        }
        let mut pieces: Vec<(i64, String)> = Vec::new();
        let mut current = String::new();
        let mut sign = 1i64;
        let mut prev: Option<char> = None;
        for ch in compact.chars() {
            let splits = (ch == '+' || ch == '-') && prev != Some('^') && prev != Some('/');
            if splits {
                if !current.is_empty() {
                    pieces.push((sign, std::mem::take(&mut current)));
                } else if prev.is_some() {
                    return Err(Error::Parse(format!("dangling operator in {text:?}")));
                }
                sign = if ch == '-' { -1 } else { 1 };
            } else {
                current.push(ch);
            }
            prev = Some(ch);
        }
        if current.is_empty() {
            return Err(Error::Parse(format!("trailing operator in {text:?}")));
        }
        pieces.push((sign, current));

        let mut out = Self::zero();
        for (sign, piece) in pieces {
            let (coef, rest) = match piece.split_once('*') {
                Some((head, tail)) => match head.parse::<i64>() {
                    Ok(c) => (c, Some(tail.to_string())),
                    Err(_) => (1, Some(piece.clone())),
                },
                None => match piece.parse::<i64>() {
                    Ok(c) => (c, None),
                    Err(_) => (1, Some(piece.clone())),
                },
            };
            let m = match rest {
                Some(r) => Monomial::parse(&r, vars)?,
                None => Monomial::one(),
            };
            out.add_term(m, sign * coef);
        }
        Ok(out)
    }

    pub fn to_text(&self, vars: &VariableSet) -> String {
        self.display(vars).to_string()
    }

    pub fn to_json(&self, vars: &VariableSet) -> CharacterJson {
        CharacterJson {
            terms: self
                .terms()
                .map(|(m, c)| TermJson { exp: m.to_json(vars), mult: c })
                .collect(),
        }
    }

    pub fn from_json(json: &CharacterJson, vars: &VariableSet) -> Result<Self> {
        let mut out = Self::zero();
        for t in &json.terms {
            out.add_term(Monomial::from_json(&t.exp, vars)?, t.mult);
        }
        Ok(out)
    }
}

/// Exponent map serialized as a JSON object in canonical variable order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MonomialJson(pub Vec<(String, Q)>);

impl Serialize for MonomialJson {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, &rat::format_q(*v))?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for MonomialJson {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = MonomialJson;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a map from variable names to rational exponents")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<MonomialJson, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, serde_json::Value>()? {
                    let q = rat::serde_q::from_value(&v).map_err(serde::de::Error::custom)?;
                    out.push((k, q));
                }
                Ok(MonomialJson(out))
            }
        }
        d.deserialize_map(V)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: MonomialJson,
    pub mult: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterJson {
    pub terms: Vec<TermJson>,
}
