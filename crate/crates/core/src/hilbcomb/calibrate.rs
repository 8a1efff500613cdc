use num_integer::Integer;
use rayon::prelude::*;

use super::{enumerate_components, index, m_hilbert, ConventionSet, YoungDiagram};
use crate::rat::{self, Q};

/// Slopes `w = a/b` at which the floor-difference identity is scanned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeGrid {
    pub slopes: Vec<Q>,
}

impl SlopeGrid {
    /// `a/b` for each `b` in `denominators` and `a` coprime to `b` with
    /// `1 <= a < 4b`; with `signed`, the negatives as well.
    pub fn new(denominators: &[i64], signed: bool) -> Self {
        let mut slopes = Vec::new();
        for &b in denominators {
            for a in 1..4 * b {
                if a.gcd(&b) == 1 {
                    slopes.push(rat::q(a, b));
                    if signed {
                        slopes.push(rat::q(-a, b));
                    }
                }
            }
        }
        slopes.sort();
        slopes.dedup();
        Self { slopes }
    }

    pub fn standard() -> Self {
        Self::new(&[2, 3, 4], false)
    }
}

/// Which form of the floor-difference identity to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiflemForm {
    /// `floor<ind_lambda, w> - floor<ind_mu, w> = m_lambda(w) - m_mu(w)`.
    Literal,
    /// `e_lambda - e_mu = (m_lambda(w) - m_mu(w)) / 2` with
    /// `e = floor<ind, w> + rk(ind - ind^nu) / 2`, the exact `hbar`
    /// exponent of the `q -> 0` limit of `Theta(N^-) / Theta(P)`.
    Corrected,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiflemFailure {
    pub w: Q,
    pub lambda: YoungDiagram,
    pub mu: YoungDiagram,
    pub lhs: Q,
    pub rhs: Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConventionOutcome {
    pub conventions: ConventionSet,
    pub form: DiflemForm,
    pub pairs_checked: usize,
    pub failures: usize,
    pub first_failure: Option<DiflemFailure>,
}

impl ConventionOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// `(lhs, rhs)` contribution of one diagram to the identity in `form`.
pub fn diflem_sides(lambda: &YoungDiagram, w: Q, conv: &ConventionSet, form: DiflemForm) -> (Q, Q) {
    let ind = index(lambda, conv);
    let floors = rat::int(ind.floor_pairing(&[w]));
    let m = m_hilbert(lambda, w, conv);
    match form {
        DiflemForm::Literal => (floors, m),
        DiflemForm::Corrected => {
            let moving = (&ind - &ind.invariant_part(&[w])).rank();
            (floors + rat::q(moving, 2), m / rat::int(2))
        }
    }
}

/// Checks the floor-difference identity in `form` for all pairs of
/// diagrams of size `1..=n_max` lying in one component of the fixed locus
/// of the order-`b` subgroup, `b` the denominator of `w`.
pub fn diflem_check(n_max: usize, grid: &SlopeGrid, conv: &ConventionSet, form: DiflemForm) -> ConventionOutcome {
    let jobs: Vec<(usize, Q)> = (1..=n_max).flat_map(|n| grid.slopes.iter().map(move |w| (n, *w))).collect();
    let results: Vec<(usize, Vec<DiflemFailure>)> = jobs
        .par_iter()
        .map(|&(n, w)| {
            let b = *w.denom() as u32;
            let comps = enumerate_components(n, b, conv).expect("b >= 1");
            let mut pairs = 0;
            let mut fails = Vec::new();
            for diagrams in comps.values() {
                let data: Vec<(Q, Q)> = diagrams.iter().map(|l| diflem_sides(l, w, conv, form)).collect();
                for x in 0..diagrams.len() {
                    for y in x + 1..diagrams.len() {
                        pairs += 1;
                        let lhs = data[x].0 - data[y].0;
                        let rhs = data[x].1 - data[y].1;
                        if lhs != rhs {
                            fails.push(DiflemFailure {
                                w,
                                lambda: diagrams[x].clone(),
                                mu: diagrams[y].clone(),
                                lhs,
                                rhs,
                            });
                        }
                    }
                }
            }
            (pairs, fails)
        })
        .collect();
    let pairs_checked = results.iter().map(|r| r.0).sum();
    let failures = results.iter().map(|r| r.1.len()).sum();
    let first_failure = results.into_iter().flat_map(|r| r.1).next();
    ConventionOutcome { conventions: *conv, form, pairs_checked, failures, first_failure }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CalibrationReport {
    pub outcomes: Vec<ConventionOutcome>,
    /// The first passing combination in [`ConventionSet::all`] order.
    pub selected: Option<ConventionSet>,
}

/// Scans all four convention combinations against the floor-difference
/// identity in `form`.
pub fn calibrate(n_max: usize, grid: &SlopeGrid, form: DiflemForm) -> CalibrationReport {
    let outcomes: Vec<ConventionOutcome> =
        ConventionSet::all().iter().map(|c| diflem_check(n_max, grid, c, form)).collect();
    let selected = outcomes.iter().find(|o| o.passed()).map(|o| o.conventions);
    CalibrationReport { outcomes, selected }
}
