//! JSON form of restriction matrices and K-theoretic candidates.
//!
//! ```text
//! {
//!   "variables": {"equivariant": ["a"], "hbar": "hbar", "kahler": ["z"]},
//!   "labels": ["(2)", "(1,1)"],
//!   "entries": [{"row": "(2)", "col": "(1,1)", "value": {"terms": [...]}}],
//!   "metadata": {"hilbert": true, "content": "i-j", "attract": "neg"}
//! }
//! ```
//!
//! Characters inside metadata use the canonical text form; rational
//! numbers are `"p/q"` strings or integers.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{KMatrixCandidate, Metadata, RestrictionMatrix};
use crate::balanced::{BalancedExpression, BalancedExpressionJson};
use crate::charalg::{Chamber, Character, RationalExpr, VariableSet};
use crate::error::{Error, Result};
use crate::hilbcomb::ConventionSet;
use crate::rat::{serde_q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rational(#[serde(with = "serde_q")] pub Q);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariablesJson {
    pub equivariant: Vec<String>,
    pub hbar: String,
    pub kahler: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryJson {
    pub row: String,
    pub col: String,
    pub value: BalancedExpressionJson,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct MetadataJson {
    #[serde(default)]
    pub hilbert: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub content: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attract: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chamber: Option<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub polarization: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub n_minus: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub kahler_shift: BTreeMap<String, Vec<Rational>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub diagonal: BTreeMap<String, RationalExprJson>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub slopes: BTreeMap<String, Rational>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub windows: BTreeMap<String, (Rational, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestrictionMatrixJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variables: Option<VariablesJson>,
    pub labels: Vec<String>,
    #[serde(default)]
    pub entries: Vec<EntryJson>,
    #[serde(default)]
    pub metadata: MetadataJson,
}

/// `prod(num) / prod(den)` with factors in canonical text form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalExprJson {
    #[serde(default)]
    pub num: Vec<String>,
    #[serde(default)]
    pub den: Vec<String>,
}

impl RationalExprJson {
    pub fn from_expr(e: &RationalExpr, vars: &VariableSet) -> Self {
        let text = |fs: &[Character]| fs.iter().map(|f| f.to_text(vars)).collect();
        Self { num: text(e.numerator_factors()), den: text(e.denominator_factors()) }
    }

    pub fn to_expr(&self, vars: &VariableSet) -> Result<RationalExpr> {
        let parse = |fs: &[String]| fs.iter().map(|f| Character::parse(f, vars)).collect::<Result<Vec<_>>>();
        RationalExpr::from_factors(parse(&self.num)?, parse(&self.den)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KEntryJson {
    pub row: String,
    pub col: String,
    pub value: RationalExprJson,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KMatrixJson {
    pub labels: Vec<String>,
    pub entries: Vec<KEntryJson>,
}

impl KMatrixCandidate {
    /// Off-diagonal nonzero entries in label order; the unit diagonal is
    /// implied.
    pub fn to_json(&self, vars: &VariableSet) -> KMatrixJson {
        KMatrixJson {
            labels: self.labels.clone(),
            entries: self
                .entries
                .iter()
                .filter(|((r, c), _)| r != c)
                .map(|(&(r, c), e)| KEntryJson {
                    row: self.labels[r].clone(),
                    col: self.labels[c].clone(),
                    value: RationalExprJson::from_expr(e, vars),
                    text: e.display(vars).to_string(),
                })
                .collect(),
        }
    }
}

impl RestrictionMatrix {
    pub fn from_json(json: &RestrictionMatrixJson) -> Result<Self> {
        let vars = match &json.variables {
            Some(v) => VariableSet::new(v.equivariant.clone(), v.hbar.clone(), v.kahler.clone())?,
            None => VariableSet::default(),
        };
        let mut index = BTreeMap::new();
        for (i, l) in json.labels.iter().enumerate() {
            if index.insert(l.as_str(), i).is_some() {
                return Err(Error::Parse(format!("duplicate label {l:?}")));
            }
        }
        let pos = |l: &str| index.get(l).copied().ok_or_else(|| Error::Parse(format!("unknown label {l:?}")));

        let mut entries = BTreeMap::new();
        for e in &json.entries {
            let key = (pos(&e.row)?, pos(&e.col)?);
            if entries.insert(key, BalancedExpression::from_json(&e.value, &vars)?).is_some() {
                return Err(Error::Parse(format!("duplicate entry ({}, {})", e.row, e.col)));
            }
        }

        let m = &json.metadata;
        let conventions = ConventionSet::parse(
            m.content.as_deref().unwrap_or("i-j"),
            m.attract.as_deref().unwrap_or("attractNegative"),
        )?;
        let order = match &m.order {
            Some(o) => {
                let order = o.iter().map(|l| pos(l)).collect::<Result<Vec<_>>>()?;
                let mut sorted = order.clone();
                sorted.sort_unstable();
                if sorted != (0..json.labels.len()).collect::<Vec<_>>() {
                    return Err(Error::Parse("order must list every label once".into()));
                }
                order
            }
            None => (0..json.labels.len()).collect(),
        };
        let chamber = match &m.chamber {
            Some(d) => Some(Chamber::new(d.iter().map(|r| r.0).collect())?),
            None => None,
        };
        let characters = |map: &BTreeMap<String, String>| -> Result<BTreeMap<usize, Character>> {
            map.iter().map(|(l, c)| Ok((pos(l)?, Character::parse(c, &vars)?))).collect()
        };
        let meta = Metadata {
            hilbert: m.hilbert,
            conventions,
            order,
            chamber,
            polarization: characters(&m.polarization)?,
            n_minus: characters(&m.n_minus)?,
            kahler_shift: m
                .kahler_shift
                .iter()
                .map(|(l, v)| Ok((pos(l)?, v.iter().map(|r| r.0).collect())))
                .collect::<Result<_>>()?,
            diagonal: m.diagonal.iter().map(|(l, e)| Ok((pos(l)?, e.to_expr(&vars)?))).collect::<Result<_>>()?,
            slopes: m.slopes.iter().map(|(l, s)| Ok((pos(l)?, s.0))).collect::<Result<_>>()?,
            windows: m.windows.iter().map(|(l, (a, b))| Ok((pos(l)?, (a.0, b.0)))).collect::<Result<_>>()?,
        };
        Ok(Self { vars, labels: json.labels.clone(), entries, meta })
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let json: RestrictionMatrixJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&json)
    }
}
