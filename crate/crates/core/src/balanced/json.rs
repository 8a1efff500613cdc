use serde::{Deserialize, Serialize};

use super::{BalancedExpression, BalancedTerm};
use crate::charalg::{Monomial, MonomialJson, VariableSet};
use crate::error::Result;
use crate::qtheta::ThetaArgument;
use crate::rat::{serde_q, Q};

/// `{"exp": {...}, "qshift": "p/q"}`; a missing shift means 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaArgumentJson {
    pub exp: MonomialJson,
    #[serde(default, with = "serde_q")]
    pub qshift: Q,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BalancedTermJson {
    #[serde(default)]
    pub prefactor: MonomialJson,
    #[serde(default)]
    pub num: Vec<ThetaArgumentJson>,
    #[serde(default)]
    pub den: Vec<ThetaArgumentJson>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BalancedExpressionJson {
    pub terms: Vec<BalancedTermJson>,
}

impl ThetaArgument {
    pub fn to_json(&self, vars: &VariableSet) -> ThetaArgumentJson {
        ThetaArgumentJson { exp: self.monomial().to_json(vars), qshift: self.q_shift() }
    }

    pub fn from_json(json: &ThetaArgumentJson, vars: &VariableSet) -> Result<Self> {
        Self::new(Monomial::from_json(&json.exp, vars)?, json.qshift)
    }
}

impl BalancedExpression {
    pub fn to_json(&self, vars: &VariableSet) -> BalancedExpressionJson {
        let args = |xs: &[ThetaArgument]| xs.iter().map(|a| a.to_json(vars)).collect();
        BalancedExpressionJson {
            terms: self
                .terms
                .iter()
                .map(|t| BalancedTermJson {
                    prefactor: t.prefactor.to_json(vars),
                    num: args(&t.num),
                    den: args(&t.den),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &BalancedExpressionJson, vars: &VariableSet) -> Result<Self> {
        let args = |xs: &[ThetaArgumentJson]| -> Result<Vec<ThetaArgument>> {
            xs.iter().map(|a| ThetaArgument::from_json(a, vars)).collect()
        };
        let terms = json
            .terms
            .iter()
            .map(|t| Ok(BalancedTerm::new(Monomial::from_json(&t.prefactor, vars)?, args(&t.num)?, args(&t.den)?)))
            .collect::<Result<_>>()?;
        Ok(Self::new(terms))
    }
}
