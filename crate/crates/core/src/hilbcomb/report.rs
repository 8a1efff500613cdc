use serde::Serialize;

use super::{
    contents, d_lambda, hooks, index, m_general, m_hilbert, n_minus, nu_component, polarization, sigma,
    ConventionSet, YoungDiagram,
};
use crate::charalg::VariableSet;
use crate::error::Result;
use crate::rat::{self, Q};

/// One JSON-lines record describing a fixed point of `Hilb^n`.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DiagramRecord {
    pub diagram: Vec<usize>,
    pub n: usize,
    pub contents: Vec<i64>,
    pub hooks: Vec<i64>,
    pub d: i64,
    pub sigma: String,
    pub polarization: String,
    pub index: String,
    pub n_minus: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub component: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_hilbert: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_general: Option<String>,
}

impl DiagramRecord {
    pub fn new(lambda: &YoungDiagram, conv: &ConventionSet, b: Option<u32>, w: Option<Q>) -> Result<Self> {
        let vars = VariableSet::default();
        Ok(Self {
            diagram: lambda.rows().to_vec(),
            n: lambda.size(),
            contents: contents(lambda, conv),
            hooks: hooks(lambda),
            d: d_lambda(lambda, conv),
            sigma: rat::format_q(sigma(lambda, conv)),
            polarization: polarization(lambda, conv).to_text(&vars),
            index: index(lambda, conv).to_text(&vars),
            n_minus: n_minus(lambda, conv).to_text(&vars),
            b,
            component: b.map(|b| nu_component(lambda, b, conv)).transpose()?,
            w: w.map(rat::format_q),
            m_hilbert: w.map(|w| rat::format_q(m_hilbert(lambda, w, conv))),
            m_general: w.map(|w| rat::format_q(m_general(lambda, w, conv))),
        })
    }
}
