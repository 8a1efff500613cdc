//! Fixed-point combinatorics of the Hilbert scheme of points in the plane:
//! contents, hooks, the polarization at a fixed point, the integers
//! `d_lambda` and `m_lambda(w)`, and the classification of diagrams into
//! components of the fixed locus of a cyclic subgroup of order `b`.

mod calibrate;
mod diagram;
mod report;

use std::collections::BTreeMap;

use num_integer::Integer;

use crate::charalg::{Chamber, Character, Monomial, Var};
use crate::error::{Error, Result};
use crate::rat::{self, Q};

pub use calibrate::{
    calibrate, diflem_check, diflem_sides, CalibrationReport, ConventionOutcome, DiflemFailure, DiflemForm, SlopeGrid,
};
pub use diagram::{partitions, YoungDiagram};
pub use report::DiagramRecord;

const A: Var = Var::Equivariant(0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ContentSign {
    /// `c(i, j) = i - j` for the box in row `i`, column `j`.
    RowMinusColumn,
    ColumnMinusRow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChamberSign {
    /// Chamber direction `+1` on the one-dimensional torus.
    AttractPositive,
    /// Chamber direction `-1`.
    AttractNegative,
}

/// The two sign conventions left open by the fixed-point formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConventionSet {
    pub content: ContentSign,
    pub chamber: ChamberSign,
}

impl Default for ConventionSet {
    /// The combination selected by [`calibrate`].
    fn default() -> Self {
        Self { content: ContentSign::RowMinusColumn, chamber: ChamberSign::AttractNegative }
    }
}

impl ConventionSet {
    /// All four combinations, `i - j` first.
    pub fn all() -> [Self; 4] {
        use ChamberSign::*;
        use ContentSign::*;
        [
            Self { content: RowMinusColumn, chamber: AttractNegative },
            Self { content: RowMinusColumn, chamber: AttractPositive },
            Self { content: ColumnMinusRow, chamber: AttractNegative },
            Self { content: ColumnMinusRow, chamber: AttractPositive },
        ]
    }

    pub fn chamber(&self) -> Chamber {
        let d = match self.chamber {
            ChamberSign::AttractPositive => 1,
            ChamberSign::AttractNegative => -1,
        };
        Chamber::new(vec![rat::int(d)]).expect("nonzero direction")
    }

    pub fn label(&self) -> String {
        let c = match self.content {
            ContentSign::RowMinusColumn => "i-j",
            ContentSign::ColumnMinusRow => "j-i",
        };
        let s = match self.chamber {
            ChamberSign::AttractPositive => "attractPositive",
            ChamberSign::AttractNegative => "attractNegative",
        };
        format!("{c},{s}")
    }

    pub fn parse(content: &str, chamber: &str) -> Result<Self> {
        let content = match content {
            "i-j" => ContentSign::RowMinusColumn,
            "j-i" => ContentSign::ColumnMinusRow,
            other => return Err(Error::Parse(format!("content sign {other:?}: expected i-j or j-i"))),
        };
        let chamber = match chamber {
            "attractPositive" | "positive" | "pos" | "+" => ChamberSign::AttractPositive,
            "attractNegative" | "negative" | "neg" | "-" => ChamberSign::AttractNegative,
            other => {
                return Err(Error::Parse(format!(
                    "chamber sign {other:?}: expected attractPositive or attractNegative"
                )))
            }
        };
        Ok(Self { content, chamber })
    }
}

pub fn contents(lambda: &YoungDiagram, conv: &ConventionSet) -> Vec<i64> {
    lambda
        .boxes()
        .map(|(i, j)| match conv.content {
            ContentSign::RowMinusColumn => i as i64 - j as i64,
            ContentSign::ColumnMinusRow => j as i64 - i as i64,
        })
        .collect()
}

pub fn hooks(lambda: &YoungDiagram) -> Vec<i64> {
    lambda.boxes().map(|(i, j)| lambda.hook(i, j) as i64).collect()
}

fn a_pow(e: i64) -> Monomial {
    Monomial::from_ints([(A, e)])
}

/// `sum_{i,j} a^{c_i - c_j + 1} - sum_{i,j} a^{c_i - c_j} + sum_i a^{c_i}`.
pub fn polarization(lambda: &YoungDiagram, conv: &ConventionSet) -> Character {
    let c = contents(lambda, conv);
    let mut p = Character::zero();
    for ci in &c {
        for cj in &c {
            p.add_term(a_pow(ci - cj + 1), 1);
            p.add_term(a_pow(ci - cj), -1);
        }
        p.add_term(a_pow(*ci), 1);
    }
    p
}

pub fn d_lambda(lambda: &YoungDiagram, conv: &ConventionSet) -> i64 {
    contents(lambda, conv).iter().sum()
}

/// `a`-exponent of `det P_lambda`.
pub fn sigma(lambda: &YoungDiagram, conv: &ConventionSet) -> Q {
    polarization(lambda, conv).determinant().exponent(A)
}

/// The chamber-positive part of the polarization.
pub fn index(lambda: &YoungDiagram, conv: &ConventionSet) -> Character {
    polarization(lambda, conv).chamber_split(&conv.chamber()).positive
}

/// `N^- = P_{<0} + hbar * conj(P_{>0})`.
pub fn n_minus(lambda: &YoungDiagram, conv: &ConventionSet) -> Character {
    let split = polarization(lambda, conv).chamber_split(&conv.chamber());
    &split.negative + &split.positive.conjugate().mul_monomial(&Monomial::var(Var::Hbar))
}

/// `w d_lambda - sum_boxes floor(hook * w)`.
pub fn m_hilbert(lambda: &YoungDiagram, w: Q, conv: &ConventionSet) -> Q {
    let floors: i64 = hooks(lambda).iter().map(|h| rat::floor(w * rat::int(*h))).sum();
    w * rat::int(d_lambda(lambda, conv)) - rat::int(floors)
}

/// `<sigma_lambda, w> - sum_{s in char_A(N^-)} floor(<s, w>)`.
pub fn m_general(lambda: &YoungDiagram, w: Q, conv: &ConventionSet) -> Q {
    let nm = n_minus(lambda, conv).equivariant_character();
    sigma(lambda, conv) * w - rat::int(nm.floor_pairing(&[w]))
}

/// Number of boxes per content residue mod `b`.
pub fn nu_component(lambda: &YoungDiagram, b: u32, conv: &ConventionSet) -> Result<Vec<usize>> {
    if b == 0 {
        return Err(Error::InvalidArgument("b must be positive".into()));
    }
    let mut counts = vec![0; b as usize];
    for c in contents(lambda, conv) {
        counts[c.rem_euclid(b as i64) as usize] += 1;
    }
    Ok(counts)
}

/// Diagrams of size `n` grouped by their residue counts; diagrams within a
/// group appear in enumeration order.
pub fn enumerate_components(n: usize, b: u32, conv: &ConventionSet) -> Result<BTreeMap<Vec<usize>, Vec<YoungDiagram>>> {
    let mut out: BTreeMap<Vec<usize>, Vec<YoungDiagram>> = BTreeMap::new();
    for lambda in partitions(n) {
        out.entry(nu_component(&lambda, b, conv)?).or_default().push(lambda);
    }
    Ok(out)
}

/// Whether the limit at slope `w` can be nontrivial for `Hilb^n`: the
/// reduced denominator of `w` is at most `n`.
pub fn is_nontrivial_slope(n: usize, w: Q) -> bool {
    (*w.denom() as u64) <= n as u64
}

/// All `w` in `[lo, hi]` with reduced denominator at most `n`, sorted.
pub fn nontrivial_slopes(n: usize, lo: Q, hi: Q) -> Vec<Q> {
    let mut out: Vec<Q> = (1..=n.max(1) as i64)
        .flat_map(|b| {
            let start = rat::floor(lo * rat::int(b)) - 1;
            let end = rat::floor(hi * rat::int(b)) + 1;
            (start..=end).filter(move |a| a.gcd(&b) == 1).map(move |a| rat::q(a, b))
        })
        .filter(|w| *w >= lo && *w <= hi)
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Diagonal data `Z = diag(z^{w d_lambda})` and
/// `H = diag((-1)^{rk(ind - ind^nu)} hbar^{m_lambda(w)})` on one component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HsthmMatrices {
    pub labels: Vec<YoungDiagram>,
    pub z_exponents: Vec<Q>,
    pub h_signs: Vec<i64>,
    pub h_exponents: Vec<Q>,
}

pub fn hsthm_matrices(component: &[YoungDiagram], w: Q, conv: &ConventionSet) -> Result<HsthmMatrices> {
    let b = *w.denom() as u32;
    let mut residues = None;
    let mut out = HsthmMatrices {
        labels: component.to_vec(),
        z_exponents: Vec::new(),
        h_signs: Vec::new(),
        h_exponents: Vec::new(),
    };
    for lambda in component {
        let r = nu_component(lambda, b, conv)?;
        match &residues {
            None => residues = Some(r),
            Some(first) if *first != r => {
                return Err(Error::ComponentMismatch(format!(
                    "{lambda} has residue counts {r:?}, expected {first:?} for b = {b}"
                )))
            }
            _ => {}
        }
        let ind = index(lambda, conv);
        let moving = &ind - &ind.invariant_part(&[w]);
        out.z_exponents.push(w * rat::int(d_lambda(lambda, conv)));
        out.h_signs.push(if moving.rank().is_even() { 1 } else { -1 });
        out.h_exponents.push(m_hilbert(lambda, w, conv));
    }
    Ok(out)
}

impl HsthmMatrices {
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }
}
