//! Restriction matrices of elliptic stable envelopes and the shifted double
//! limit that turns them into K-theoretic stable-envelope candidates.
//!
//! The input is the normalized matrix `T` (unit diagonal, triangular in a
//! declared order) whose off-diagonal entries are balanced expressions. The
//! pipeline substitutes `a -> a q^w`, takes `q -> 0`, corrects by the Kähler
//! monomial carried by each entry's quasiperiods and sends the Kähler
//! variables to the ends of a chamber.

mod json;

#[cfg(test)]
mod tests;

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::balanced::{z_limit, BalancedExpression, BalancedTerm, KahlerChamber};
use crate::charalg::{Chamber, Character, Monomial, RationalExpr, Var, VariableSet};
use crate::error::{Error, Result};
use crate::hilbcomb::{self, ConventionSet, YoungDiagram};
use crate::qtheta::{theta_ratio_limit, ThetaArgument};
use crate::rat::{self, Q};

pub use json::{KMatrixJson, RationalExprJson, RestrictionMatrixJson};

/// Label-indexed side data of a restriction matrix. Every map is keyed by
/// label position.
#[derive(Clone, Debug, Default)]
pub struct Metadata {
    /// Labels are Young diagrams of one Hilbert scheme.
    pub hilbert: bool,
    pub conventions: ConventionSet,
    /// Label positions from the bottom of the support order upwards. Entry
    /// `(row, col)` may be nonzero only when `row` sits below `col`.
    pub order: Vec<usize>,
    /// Attracting direction on the equivariant torus, used to split
    /// polarizations when labels are not Young diagrams.
    pub chamber: Option<Chamber>,
    pub polarization: BTreeMap<usize, Character>,
    pub n_minus: BTreeMap<usize, Character>,
    /// Constant Kähler exponent of each diagonal entry of `Z`, on top of
    /// the part linear in `w` read off from the quasiperiods.
    pub kahler_shift: BTreeMap<usize, Vec<Q>>,
    /// Unnormalized diagonal restrictions.
    pub diagonal: BTreeMap<usize, RationalExpr>,
    pub slopes: BTreeMap<usize, Q>,
    /// Closed `a`-degree window of each label.
    pub windows: BTreeMap<usize, (Q, Q)>,
}

#[derive(Clone, Debug)]
pub struct RestrictionMatrix {
    pub vars: VariableSet,
    pub labels: Vec<String>,
    /// Off-diagonal entries; absent means zero. Diagonal entries, when
    /// present, must be the constant 1.
    pub entries: BTreeMap<(usize, usize), BalancedExpression>,
    pub meta: Metadata,
}

impl RestrictionMatrix {
    /// The identity on `labels` with default metadata.
    pub fn identity(vars: VariableSet, labels: Vec<String>) -> Self {
        let order = (0..labels.len()).collect();
        Self { vars, labels, entries: BTreeMap::new(), meta: Metadata { order, ..Metadata::default() } }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    fn position(&self, label: usize) -> usize {
        self.meta.order.iter().position(|&l| l == label).unwrap_or(label)
    }

    fn support_allows(&self, row: usize, col: usize) -> bool {
        row == col || self.position(row) < self.position(col)
    }

    fn diagrams(&self) -> Result<Vec<YoungDiagram>> {
        self.labels.iter().map(|l| l.parse()).collect()
    }

    /// Polarization and `N^-` of a label, from metadata or from the
    /// Hilbert-scheme formulas.
    fn fixed_point_data(&self, label: usize) -> Option<(Character, Character)> {
        if self.meta.hilbert {
            let lambda: YoungDiagram = self.labels[label].parse().ok()?;
            let conv = &self.meta.conventions;
            return Some((hilbcomb::polarization(&lambda, conv), hilbcomb::n_minus(&lambda, conv)));
        }
        let p = self.meta.polarization.get(&label)?;
        let n = match self.meta.n_minus.get(&label) {
            Some(n) => n.clone(),
            None => n_minus_of(p, self.meta.chamber.as_ref()?),
        };
        Some((p.clone(), n))
    }

    fn chamber_for(&self) -> Option<Chamber> {
        if self.meta.hilbert {
            Some(self.meta.conventions.chamber())
        } else {
            self.meta.chamber.clone()
        }
    }

    fn entry_name(&self, (r, c): (usize, usize)) -> (String, String) {
        (self.labels[r].clone(), self.labels[c].clone())
    }
}

/// Outcome of one check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entry: Option<(String, String)>,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

/// Ordered list of check outcomes; nothing in a report throws.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<CheckRecord>,
}

impl Report {
    fn push(&mut self, check: &str, entry: Option<(String, String)>, status: CheckStatus, detail: String) {
        self.checks.push(CheckRecord { check: check.into(), entry, status, detail });
    }

    fn verdict(&mut self, check: &str, entry: Option<(String, String)>, ok: bool, detail: String) {
        let status = if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        self.push(check, entry, status, if ok { String::new() } else { detail });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn count(&self, status: CheckStatus) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }
}

fn is_unit(e: &BalancedExpression) -> bool {
    matches!(e.terms.as_slice(), [t] if t.prefactor.is_one() && t.num.is_empty() && t.den.is_empty())
}

/// Section-structure checks on every stored entry: balance in the
/// equivariant and Kähler variables, separated poles, one quasiperiod
/// index per entry, support, and for Young-diagram labels the Kähler
/// pairing `d_lambda - d_mu`.
pub fn validate_section(t: &RestrictionMatrix) -> Report {
    let mut report = Report::default();
    let kahler = t.vars.kahler_vars();
    let diagrams = if t.meta.hilbert { t.diagrams().ok() } else { None };
    if t.meta.hilbert && diagrams.is_none() {
        report.push("hilbertLabels", None, CheckStatus::Fail, "labels are not Young diagrams".into());
    }
    for (&(r, c), e) in &t.entries {
        let name = Some(t.entry_name((r, c)));
        if r == c {
            report.verdict("unitDiagonal", name, is_unit(e), "diagonal entry is not 1".into());
            continue;
        }
        report.verdict("support", name.clone(), t.support_allows(r, c), "entry outside the declared support order".into());
        report.verdict(
            "balancedEquivariant",
            name.clone(),
            e.is_balanced_in_equivariant(),
            "some term is not balanced in the equivariant variables".into(),
        );
        report.verdict(
            "balancedKahler",
            name.clone(),
            e.is_balanced_in(&kahler),
            "some term is not balanced in the Kähler variables".into(),
        );
        report.verdict(
            "separatedPoles",
            name.clone(),
            e.has_separated_poles(),
            "a denominator theta mixes equivariant and Kähler variables".into(),
        );
        match e.quasiperiod_index() {
            Err(err) => report.push("quasiperiodIndex", name, CheckStatus::Fail, err.to_string()),
            Ok(p) => {
                report.push("quasiperiodIndex", name.clone(), CheckStatus::Pass, String::new());
                if let Some(ds) = &diagrams {
                    let conv = &t.meta.conventions;
                    let want = hilbcomb::d_lambda(&ds[r], conv) - hilbcomb::d_lambda(&ds[c], conv);
                    let got = p.get(0, 0);
                    report.verdict(
                        "hilbertPairing",
                        name,
                        got == want,
                        format!("pairing {got}, expected d_lambda - d_mu = {want}"),
                    );
                }
            }
        }
    }
    report
}

/// Normalized K-theoretic candidate: unit diagonal plus the off-diagonal
/// limits that do not vanish.
#[derive(Clone, Debug)]
pub struct KMatrixCandidate {
    pub labels: Vec<String>,
    pub entries: BTreeMap<(usize, usize), RationalExpr>,
}

impl KMatrixCandidate {
    pub fn get(&self, r: usize, c: usize) -> RationalExpr {
        match self.entries.get(&(r, c)) {
            Some(e) => e.clone(),
            None if r == c => RationalExpr::one(),
            None => RationalExpr::zero(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().all(|(&(r, c), e)| if r == c { e.equals(&RationalExpr::one()) } else { e.is_zero() })
    }
}

/// Diagonal conjugation data for Young-diagram labels, in both exponent
/// normalizations: `hbar^{m}` and `hbar^{m/2}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HConjugation {
    pub signs: Vec<i64>,
    #[serde(with = "rat::serde_q_vec")]
    pub exponents_full: Vec<Q>,
    #[serde(with = "rat::serde_q_vec")]
    pub exponents_half: Vec<Q>,
    #[serde(with = "rat::serde_q_vec")]
    pub z_exponents: Vec<Q>,
}

#[derive(Clone, Debug)]
pub struct LimitOutput {
    pub candidate: KMatrixCandidate,
    pub h: Option<HConjugation>,
}

fn at_entry(err: Error, (r, c): &(String, String)) -> Error {
    let tag = |m: String| format!("entry ({r}, {c}): {m}");
    match err {
        Error::LimitUndefined(m) => Error::LimitUndefined(tag(m)),
        Error::DivergentLimit(m) => Error::DivergentLimit(tag(m)),
        Error::NormalizationMismatch(m) => Error::NormalizationMismatch(tag(m)),
        Error::InconsistentBundle(m) => Error::InconsistentBundle(tag(m)),
        Error::DivisionByZero(m) => Error::DivisionByZero(tag(m)),
        Error::NonIntegralExponent(m) => Error::NonIntegralExponent(tag(m)),
        other => other,
    }
}

/// The double limit `z -> 0_D` of `Z (lim_{q -> 0} T(a q^w, z)) Z^{-1}`
/// entry by entry, before conjugation by `H`.
///
/// Entry `(lambda, mu)` is corrected by `z^{<w, p>}` with `p` its
/// quasiperiod index, times the ratio of the constant Kähler shifts of the
/// two labels.
pub fn apply_limit_theorem(t: &RestrictionMatrix, w: &[Q], chamber: &KahlerChamber) -> Result<LimitOutput> {
    let h = if t.meta.hilbert {
        let [slope] = w else {
            return Err(Error::InvalidArgument(format!("Hilbert labels need one slope, got {}", w.len())));
        };
        let diagrams = t.diagrams()?;
        let hm = hilbcomb::hsthm_matrices(&diagrams, *slope, &t.meta.conventions)?;
        Some(HConjugation {
            signs: hm.h_signs.clone(),
            exponents_half: hm.h_exponents.iter().map(|m| m / rat::int(2)).collect(),
            exponents_full: hm.h_exponents,
            z_exponents: hm.z_exponents,
        })
    } else {
        None
    };

    let kahler = chamber.len();
    let shift = |l: usize| -> Vec<Q> {
        let mut v = t.meta.kahler_shift.get(&l).cloned().unwrap_or_default();
        v.resize(kahler, Q::zero());
        v
    };
    let work: Vec<(&(usize, usize), &BalancedExpression)> = t.entries.iter().filter(|(k, _)| k.0 != k.1).collect();
    let limits: Vec<((usize, usize), RationalExpr)> = work
        .par_iter()
        .map(|&(&(r, c), e)| {
            let name = t.entry_name((r, c));
            let entry = || -> Result<RationalExpr> {
                let p = e.quasiperiod_index()?;
                let ql = e.q_limit(w)?;
                let (sr, sc) = (shift(r), shift(c));
                let correction: Vec<Q> =
                    p.z_correction(w, kahler).iter().enumerate().map(|(j, x)| x + sr[j] - sc[j]).collect();
                z_limit(&ql.combined(), chamber, &correction)
            };
            entry().map(|v| ((r, c), v)).map_err(|err| at_entry(err, &name))
        })
        .collect::<Result<_>>()?;

    for (&(r, c), e) in &t.entries {
        if r == c && !is_unit(e) {
            return Err(Error::InvalidArgument(format!("diagonal entry at {} is not 1", t.labels[r])));
        }
    }
    let entries = limits.into_iter().filter(|(_, v)| !v.is_zero()).collect();
    Ok(LimitOutput { candidate: KMatrixCandidate { labels: t.labels.clone(), entries }, h })
}

/// `N^- = P_{<0} + hbar * conj(P_{>0})` for a chamber on the equivariant
/// torus.
pub fn n_minus_of(p: &Character, chamber: &Chamber) -> Character {
    let split = p.chamber_split(chamber);
    &split.negative + &split.positive.conjugate().mul_monomial(&Monomial::var(Var::Hbar))
}

fn theta_args(c: &Character, w: &[Q]) -> Result<(Vec<ThetaArgument>, Vec<ThetaArgument>)> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (m, mult) in c.terms() {
        let arg = ThetaArgument::new(m.clone(), Q::zero())?.shifted(w);
        let side = if mult > 0 { &mut pos } else { &mut neg };
        side.extend(std::iter::repeat_n(arg, mult.unsigned_abs() as usize));
    }
    Ok((pos, neg))
}

fn ratio_arguments(n_minus: &Character, p: &Character, w: &[Q]) -> Result<(Vec<ThetaArgument>, Vec<ThetaArgument>)> {
    let (mut num, mut den) = theta_args(n_minus, w)?;
    let (p_pos, p_neg) = theta_args(p, w)?;
    den.extend(p_pos);
    num.extend(p_neg);
    Ok((num, den))
}

/// Exact `q -> 0` limit of `Theta(N^-) / Theta(P)` at `a -> a q^w`.
pub fn lemma3_limit(p: &Character, n_minus: &Character, w: &[Q]) -> Result<RationalExpr> {
    let (num, den) = ratio_arguments(n_minus, p, w)?;
    Ok(theta_ratio_limit(&num, &den)?.combined())
}

/// Numeric value of `Theta(N^-) / Theta(P)` at `a -> a q^w` for real `q`.
pub fn lemma3_numeric(
    p: &Character,
    n_minus: &Character,
    w: &[Q],
    sqrt_of: &impl Fn(Var) -> Complex64,
    q: f64,
    tolerance: f64,
) -> Result<Complex64> {
    let (num, den) = ratio_arguments(n_minus, p, w)?;
    BalancedTerm::new(Monomial::one(), num, den).eval_numeric(sqrt_of, q, tolerance)
}

/// Closed form of the same limit for `N^- = P_{<0} + hbar conj(ind)`:
///
/// ```text
/// (-1)^{rk(ind - ind^nu)} hbar^{floor<ind, w> + rk(ind - ind^nu)/2} s(N^{-,nu}) / s(P^nu)
/// ```
///
/// where `^nu` keeps the weights pairing integrally with `w`.
pub fn lemma3_closed_form(p: &Character, chamber: &Chamber, w: &[Q]) -> Result<RationalExpr> {
    let ind = p.chamber_split(chamber).positive;
    let moving = (&ind - &ind.invariant_part(w)).rank();
    let n_minus = n_minus_of(p, chamber);
    let ratio = n_minus.invariant_part(w).s_hat()?.checked_div(&p.invariant_part(w).s_hat()?)?;
    let doubled = 2 * ind.floor_pairing(w) + moving;
    let sign = if moving.rem_euclid(2) == 0 { 1 } else { -1 };
    Ok(ratio.mul_monomial(&Monomial::from_doubled([(Var::Hbar, doubled)])).scale(sign))
}

/// Closed interval of `a_i`-degrees a rational function can reach: lowest
/// numerator degree minus highest denominator degree, and vice versa.
pub fn degree_span(e: &RationalExpr, v: Var) -> Option<(Q, Q)> {
    if e.is_zero() {
        return None;
    }
    let (nlo, nhi) = e.numerator().degree_span(v)?;
    let (dlo, dhi) = e.denominator().degree_span(v).unwrap_or((0, 0));
    Some((rat::from_doubled(nlo - dhi), rat::from_doubled(nhi - dlo)))
}

/// K-theoretic stable-envelope axioms on a candidate.
///
/// * support: nonzero entries respect the declared order;
/// * normalization: each supplied unnormalized diagonal equals the closed
///   form of [`lemma3_closed_form`];
/// * degree window: with slopes and windows supplied and one equivariant
///   variable, every off-diagonal degree span lies in the window of its
///   row shifted by `s_lambda - s_mu`.
pub fn check_stab_axioms(k: &KMatrixCandidate, t: &RestrictionMatrix, w: &[Q]) -> Report {
    let mut report = Report::default();
    for (&(r, c), e) in &k.entries {
        if r != c && !e.is_zero() {
            report.verdict(
                "support",
                Some(t.entry_name((r, c))),
                t.support_allows(r, c),
                "nonzero entry outside the declared support order".into(),
            );
        }
    }
    if report.checks.is_empty() {
        report.push("support", None, CheckStatus::Pass, String::new());
    }

    for l in 0..t.len() {
        let name = Some((t.labels[l].clone(), t.labels[l].clone()));
        let Some(diag) = t.meta.diagonal.get(&l) else {
            report.push("normalization", name, CheckStatus::Skipped, "no unnormalized diagonal supplied".into());
            continue;
        };
        let expected = match (t.fixed_point_data(l), t.chamber_for()) {
            (Some((p, _)), Some(ch)) => lemma3_closed_form(&p, &ch, w),
            _ => {
                report.push("normalization", name, CheckStatus::Skipped, "no polarization or chamber".into());
                continue;
            }
        };
        match expected {
            Ok(x) => {
                let detail = format!("supplied {} but expected {}", diag.display(&t.vars), x.display(&t.vars));
                report.verdict("normalization", name, diag.equals(&x), detail);
            }
            Err(err) => report.push("normalization", name, CheckStatus::Fail, err.to_string()),
        }
    }

    let one_var = t.vars.equivariant_count() == 1;
    for (&(r, c), e) in &k.entries {
        if r == c {
            continue;
        }
        let name = Some(t.entry_name((r, c)));
        let data = (t.meta.windows.get(&r), t.meta.slopes.get(&r), t.meta.slopes.get(&c));
        let (Some(&(lo, hi)), Some(&sr), Some(&sc)) = data else {
            report.push("degreeWindow", name, CheckStatus::Skipped, "no slope data".into());
            continue;
        };
        if !one_var {
            report.push("degreeWindow", name, CheckStatus::Skipped, "several equivariant variables".into());
            continue;
        }
        let shift = sr - sc;
        let Some((dlo, dhi)) = degree_span(e, Var::Equivariant(0)) else { continue };
        let ok = lo + shift <= dlo && dhi <= hi + shift;
        report.verdict(
            "degreeWindow",
            name,
            ok,
            format!(
                "degree span [{}, {}] outside window [{}, {}]",
                rat::format_q(dlo),
                rat::format_q(dhi),
                rat::format_q(lo + shift),
                rat::format_q(hi + shift)
            ),
        );
    }
    report
}
