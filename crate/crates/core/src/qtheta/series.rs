use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;

use crate::charalg::{Character, Monomial, Var, VariableSet};
use crate::rat::{self, Q};

/// A q-series with rational exponents and character coefficients.
///
/// Coefficients at exponents `>= precision` are unknown; `precision = None`
/// marks an exact Laurent polynomial in fractional powers of q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    coeffs: BTreeMap<Q, Character>,
    precision: Option<Q>,
}

impl QSeries {
    pub fn exact(terms: impl IntoIterator<Item = (Q, Character)>) -> Self {
        let mut s = Self { coeffs: BTreeMap::new(), precision: None };
        for (e, c) in terms {
            s.add_coeff(e, c);
        }
        s
    }

    pub fn one() -> Self {
        Self::exact([(Q::zero(), Character::one())])
    }

    /// `1 - m q^e`.
    pub fn one_minus(m: &Monomial, e: Q) -> Self {
        Self::exact([(Q::zero(), Character::one()), (e, Character::term(m.clone(), -1))])
    }

    pub fn zero_to(precision: Q) -> Self {
        Self { coeffs: BTreeMap::new(), precision: Some(precision) }
    }

    fn add_coeff(&mut self, e: Q, c: Character) {
        if c.is_zero() {
            return;
        }
        if let Some(p) = self.precision {
            if e >= p {
                return;
            }
        }
        let slot = self.coeffs.entry(e).or_default();
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn precision(&self) -> Option<Q> {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn valuation(&self) -> Option<Q> {
        self.coeffs.keys().next().copied()
    }

    pub fn leading(&self) -> Option<(Q, &Character)> {
        self.coeffs.iter().next().map(|(e, c)| (*e, c))
    }

    pub fn coefficient(&self, e: Q) -> Character {
        self.coeffs.get(&e).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Q, &Character)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn truncate(&self, precision: Q) -> Self {
        let p = match self.precision {
            Some(own) if own < precision => own,
            _ => precision,
        };
        Self {
            coeffs: self.coeffs.range(..p).map(|(e, c)| (*e, c.clone())).collect(),
            precision: Some(p),
        }
    }

    /// Multiplies by `c * q^e`.
    pub fn shift(&self, e: Q, c: &Character) -> Self {
        let mut out = Self { coeffs: BTreeMap::new(), precision: self.precision.map(|p| p + e) };
        for (k, v) in &self.coeffs {
            out.add_coeff(k + e, v * c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.shift(Q::zero(), &Character::constant(-1))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let precision = match (self.precision, other.precision) {
            (None, None) => None,
            (Some(p), None) => Some(p + other.valuation_or(p)),
            (None, Some(p)) => Some(p + self.valuation_or(p)),
            (Some(p1), Some(p2)) => {
                let a = p1 + other.valuation_or(p2);
                let b = p2 + self.valuation_or(p1);
                Some(if a < b { a } else { b })
            }
        };
        let mut out = Self { coeffs: BTreeMap::new(), precision };
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &other.coeffs {
                let e = e1 + e2;
                if precision.is_some_and(|p| e >= p) {
                    continue;
                }
                out.add_coeff(e, c1 * c2);
            }
        }
        out
    }

    fn valuation_or(&self, fallback: Q) -> Q {
        self.valuation().unwrap_or(fallback)
    }

    pub fn add(&self, other: &Self) -> Self {
        let precision = match (self.precision, other.precision) {
            (None, p) | (p, None) => p,
            (Some(a), Some(b)) => Some(if a < b { a } else { b }),
        };
        let mut out = Self { coeffs: BTreeMap::new(), precision };
        for (e, c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            out.add_coeff(*e, c.clone());
        }
        out
    }

    /// Coefficient-exact comparison below `order`; false if either series is
    /// not known that far.
    pub fn agrees_below(&self, other: &Self, order: Q) -> bool {
        let known = |s: &Self| s.precision.is_none_or(|p| p >= order);
        if !known(self) || !known(other) {
            return false;
        }
        let lhs: Vec<_> = self.coeffs.range(..order).collect();
        let rhs: Vec<_> = other.coeffs.range(..order).collect();
        lhs == rhs
    }

    /// Sums the known terms at a real `q > 0`, with variables given through
    /// their square roots.
    pub fn eval_sqrt(&self, sqrt_of: &impl Fn(Var) -> Complex64, q: f64) -> Complex64 {
        self.coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, (e, c)| {
            acc + c.eval_sqrt(sqrt_of) * q.powf(rat::to_f64(*e))
        })
    }

    pub fn display<'a>(&'a self, vars: &'a VariableSet) -> impl fmt::Display + 'a {
        SeriesDisplay { s: self, vars }
    }
}

struct SeriesDisplay<'a> {
    s: &'a QSeries,
    vars: &'a VariableSet,
}

impl fmt::Display for SeriesDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.s.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "q^{{{}}}·({})", rat::format_q(*e), c.display(self.vars))?;
        }
        match self.s.precision {
            Some(p) if first => write!(f, "O(q^{{{}}})", rat::format_q(p)),
            Some(p) => write!(f, " + O(q^{{{}}})", rat::format_q(p)),
            None if first => write!(f, "0"),
            None => Ok(()),
        }
    }
}
