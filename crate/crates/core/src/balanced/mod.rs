//! Balanced sections: finite sums of monomials times theta ratios, their
//! quasiperiod data, the shift `a -> a q^w` and the limit `q -> 0`
//! followed by the Kähler limit `z -> 0` or `z -> infinity`.

mod json;
pub mod sample;
mod zlimit;

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;

use crate::charalg::{Monomial, RationalExpr, Var, VariableSet};
use crate::error::{Error, Result};
use crate::qtheta::{numeric_theta_from_sqrt, theta_ratio_limit, ThetaArgument};
use crate::rat::{self, Q};

pub use json::{BalancedExpressionJson, BalancedTermJson, ThetaArgumentJson};
pub use zlimit::{z_limit, KahlerChamber, KahlerDirection};

/// `prefactor * prod theta(num) / prod theta(den)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancedTerm {
    pub prefactor: Monomial,
    pub num: Vec<ThetaArgument>,
    pub den: Vec<ThetaArgument>,
}

/// A sum of [`BalancedTerm`]s; the empty sum is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BalancedExpression {
    pub terms: Vec<BalancedTerm>,
}

/// Signed cross pairing `sum n_i e_v` between equivariant variable `i`
/// and each Kähler variable (or `hbar`) over the theta factors of a term.
///
/// Under `a_i -> a_i q` a term balanced in the equivariant variables picks
/// up exactly `prod_v v^{-p_iv}`, so terms of one section share this data.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairingMatrix {
    entries: BTreeMap<(u16, Var), i64>,
}

impl PairingMatrix {
    /// Pairing of `a_i` with `z_j`.
    pub fn get(&self, i: u16, j: u16) -> i64 {
        self.get_var(i, Var::Kahler(j))
    }

    /// Pairing of `a_i` with `hbar`.
    pub fn hbar(&self, i: u16) -> i64 {
        self.get_var(i, Var::Hbar)
    }

    fn get_var(&self, i: u16, v: Var) -> i64 {
        self.entries.get(&(i, v)).copied().unwrap_or(0)
    }

    pub fn set(&mut self, i: u16, v: Var, value: i64) {
        if value == 0 {
            self.entries.remove(&(i, v));
        } else {
            self.entries.insert((i, v), value);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Nonzero `(equivariant index, Kähler index, value)` entries.
    pub fn kahler_entries(&self) -> impl Iterator<Item = (u16, u16, i64)> + '_ {
        self.entries.iter().filter_map(|((i, v), p)| match v {
            Var::Kahler(j) => Some((*i, *j, *p)),
            _ => None,
        })
    }

    /// The equivariant-by-Kähler block.
    pub fn to_dense(&self, equivariant: usize, kahler: usize) -> Vec<Vec<i64>> {
        (0..equivariant)
            .map(|i| (0..kahler).map(|j| self.get(i as u16, j as u16)).collect())
            .collect()
    }

    /// Exponent of each of the first `kahler` variables in `z^{<w, p>}`.
    pub fn z_correction(&self, w: &[Q], kahler: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); kahler];
        for (i, j, p) in self.kahler_entries() {
            if let (Some(wi), Some(slot)) = (w.get(i as usize), out.get_mut(j as usize)) {
                *slot += wi * rat::int(p);
            }
        }
        out
    }

    /// `prod_v v^{-sum_i k_i p_iv}`: the factor a section picks up under
    /// `a -> a q^k` for an integral vector `k`, up to the a-dependent part.
    pub fn shift_monomial(&self, k: &[i64]) -> Monomial {
        let mut pairs: BTreeMap<Var, i64> = BTreeMap::new();
        for ((i, v), p) in &self.entries {
            if let Some(ki) = k.get(*i as usize) {
                *pairs.entry(*v).or_default() -= ki * p;
            }
        }
        Monomial::from_ints(pairs)
    }

    fn accumulate(&mut self, m: &Monomial, sign: i64) {
        for (u, du) in m.iter() {
            let Var::Equivariant(i) = u else { continue };
            for (v, dv) in m.iter() {
                if v.is_equivariant() {
                    continue;
                }
                let cur = self.get_var(i, v);
                self.set(i, v, cur + sign * (du / 2) * (dv / 2));
            }
        }
    }
}

/// Result of the `q -> 0` limit: `normalization * value`.
#[derive(Clone, Debug, PartialEq)]
pub struct QLimit {
    pub normalization: Monomial,
    pub value: RationalExpr,
}

impl QLimit {
    pub fn combined(&self) -> RationalExpr {
        self.value.mul_monomial(&self.normalization)
    }
}

fn restricted_multiset(args: &[ThetaArgument], keep: &impl Fn(Var) -> bool) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = args
        .iter()
        .map(|a| a.monomial().restrict(keep))
        .filter(|m| !m.is_one())
        .collect();
    out.sort();
    out
}

impl BalancedTerm {
    pub fn new(prefactor: Monomial, num: Vec<ThetaArgument>, den: Vec<ThetaArgument>) -> Self {
        Self { prefactor, num, den }
    }

    pub fn is_balanced_in(&self, keep: impl Fn(Var) -> bool) -> bool {
        restricted_multiset(&self.num, &keep) == restricted_multiset(&self.den, &keep)
    }

    pub fn has_separated_poles(&self) -> bool {
        self.den.iter().all(|d| {
            let m = d.monomial();
            !(m.involves(Var::is_equivariant) && m.involves(Var::is_kahler))
        })
    }

    pub fn pairing(&self) -> PairingMatrix {
        let mut p = PairingMatrix::default();
        for a in &self.num {
            p.accumulate(a.monomial(), 1);
        }
        for a in &self.den {
            p.accumulate(a.monomial(), -1);
        }
        p
    }

    pub fn shifted(&self, w: &[Q]) -> Self {
        Self {
            prefactor: self.prefactor.clone(),
            num: self.num.iter().map(|a| a.shifted(w)).collect(),
            den: self.den.iter().map(|a| a.shifted(w)).collect(),
        }
    }

    /// Floating-point value at real `q > 0`, variables given through their
    /// square roots.
    pub fn eval_numeric(&self, sqrt_of: &impl Fn(Var) -> Complex64, q: f64, tolerance: f64) -> Result<Complex64> {
        let qc = Complex64::new(q, 0.0);
        let theta = |a: &ThetaArgument| -> Result<Complex64> {
            let shift = rat::to_f64(a.q_shift()) / 2.0;
            let root = a.monomial().sqrt()?.eval_sqrt(sqrt_of) * q.powf(shift);
            numeric_theta_from_sqrt(root, qc, tolerance)
        };
        let mut value = self.prefactor.eval_sqrt(sqrt_of);
        for a in &self.num {
            value *= theta(a)?;
        }
        for a in &self.den {
            value /= theta(a)?;
        }
        Ok(value)
    }
}

impl BalancedExpression {
    pub fn new(terms: Vec<BalancedTerm>) -> Self {
        Self { terms }
    }

    /// True when, term by term, the nontrivial restrictions to `vars` of the
    /// numerator arguments match those of the denominator as multisets.
    pub fn is_balanced_in(&self, vars: &[Var]) -> bool {
        self.terms.iter().all(|t| t.is_balanced_in(|v| vars.contains(&v)))
    }

    pub fn is_balanced_in_equivariant(&self) -> bool {
        self.terms.iter().all(|t| t.is_balanced_in(Var::is_equivariant))
    }

    /// No denominator argument mixes equivariant and Kähler variables.
    pub fn has_separated_poles(&self) -> bool {
        self.terms.iter().all(BalancedTerm::has_separated_poles)
    }

    /// The common cross pairing of all terms. Under `a_i -> a_i q` every
    /// term picks up `z_j^{-p_ij}`, so the bundle degree difference
    /// `chi_lambda - chi_mu` is `-p`.
    pub fn quasiperiod_index(&self) -> Result<PairingMatrix> {
        let mut terms = self.terms.iter();
        let Some(first) = terms.next() else {
            return Ok(PairingMatrix::default());
        };
        let p = first.pairing();
        for (k, t) in terms.enumerate() {
            let other = t.pairing();
            if other != p {
                return Err(Error::InconsistentBundle(format!(
                    "term 0 has pairing {:?} but term {} has {:?}",
                    p.entries,
                    k + 1,
                    other.entries
                )));
            }
        }
        Ok(p)
    }

    pub fn shift_equivariant(&self, w: &[Q]) -> Self {
        Self { terms: self.terms.iter().map(|t| t.shifted(w)).collect() }
    }

    /// Limit `q -> 0` after `a -> a q^w`. The monomial factored out of the
    /// first nonvanishing term is the normalization; every other term must
    /// differ from it by an integral monomial.
    pub fn q_limit(&self, w: &[Q]) -> Result<QLimit> {
        if !self.is_balanced_in_equivariant() {
            return Err(Error::LimitUndefined("expression is not balanced in the equivariant variables".into()));
        }
        let mut normalization: Option<Monomial> = None;
        let mut value = RationalExpr::zero();
        for (k, term) in self.shift_equivariant(w).terms.iter().enumerate() {
            let r = theta_ratio_limit(&term.num, &term.den)?;
            if r.value.is_zero() {
                continue;
            }
            let pre = &term.prefactor * &r.prefactor;
            let norm = normalization.get_or_insert_with(|| pre.clone());
            let ratio = &pre * &norm.inv();
            if !ratio.is_integral() {
                return Err(Error::NormalizationMismatch(format!(
                    "term {k} differs from the normalization by {ratio:?}"
                )));
            }
            value = &value + &r.value.mul_monomial(&ratio);
        }
        Ok(QLimit { normalization: normalization.unwrap_or_else(Monomial::one), value })
    }

    /// The whole pipeline: `q -> 0` at slope `w`, the correction
    /// `z^{<w, p>}` from the quasiperiod index, then the Kähler limit.
    pub fn corrected_limit(&self, w: &[Q], chamber: &KahlerChamber) -> Result<RationalExpr> {
        let p = self.quasiperiod_index()?;
        let ql = self.q_limit(w)?;
        let correction = p.z_correction(w, chamber.len());
        z_limit(&ql.combined(), chamber, &correction)
    }

    pub fn eval_numeric(&self, sqrt_of: &impl Fn(Var) -> Complex64, q: f64, tolerance: f64) -> Result<Complex64> {
        self.terms
            .iter()
            .try_fold(Complex64::new(0.0, 0.0), |acc, t| Ok(acc + t.eval_numeric(sqrt_of, q, tolerance)?))
    }

    pub fn display<'a>(&'a self, vars: &'a VariableSet) -> impl fmt::Display + 'a {
        ExprDisplay { e: self, vars }
    }
}

struct ExprDisplay<'a> {
    e: &'a BalancedExpression,
    vars: &'a VariableSet,
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e.terms.is_empty() {
            return write!(f, "0");
        }
        let theta = |a: &ThetaArgument| {
            format!("theta({}; q^{})", a.monomial().display(self.vars), rat::format_q(a.q_shift()))
        };
        for (k, t) in self.e.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[{}]", t.prefactor.display(self.vars))?;
            for a in &t.num {
                write!(f, " * {}", theta(a))?;
            }
            for a in &t.den {
                write!(f, " / {}", theta(a))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
