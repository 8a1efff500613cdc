//! Equivariant characters: finite integer combinations of monomials in the
//! equivariant parameters `a_i`, the weight `hbar` and the Kähler
//! parameters `z_j`, with half-integer exponents.
//!
//! Exponents are stored doubled, so every arithmetic operation on the hot
//! path is integral.

mod ratexpr;
mod serial;

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rat::{self, Q};

pub use ratexpr::RationalExpr;
pub use serial::{CharacterJson, MonomialJson, TermJson};

/// A variable of the coefficient ring. The derived order is the canonical
/// serialization order: equivariant parameters, then `hbar`, then Kähler
/// parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Equivariant(u16),
    Hbar,
    Kahler(u16),
}

impl Var {
    pub fn is_equivariant(self) -> bool {
        matches!(self, Var::Equivariant(_))
    }

    pub fn is_kahler(self) -> bool {
        matches!(self, Var::Kahler(_))
    }
}

/// Names of the variables in a session.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableSet {
    equivariant: Vec<String>,
    hbar: String,
    kahler: Vec<String>,
}

impl Default for VariableSet {
    fn default() -> Self {
        Self {
            equivariant: vec!["a".into()],
            hbar: "hbar".into(),
            kahler: vec!["z".into()],
        }
    }
}

impl VariableSet {
    pub fn new(equivariant: Vec<String>, hbar: String, kahler: Vec<String>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for name in equivariant.iter().chain(std::iter::once(&hbar)).chain(kahler.iter()) {
            if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(Error::InvalidArgument(format!("bad variable name {name:?}")));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::InvalidArgument(format!("duplicate variable name {name:?}")));
            }
        }
        Ok(Self { equivariant, hbar, kahler })
    }

    /// `a1..ar`, `hbar`, `z`: the framing torus of a quiver variety.
    pub fn framing(r: usize) -> Self {
        Self {
            equivariant: (1..=r).map(|i| format!("a{i}")).collect(),
            hbar: "hbar".into(),
            kahler: vec!["z".into()],
        }
    }

    pub fn equivariant_count(&self) -> usize {
        self.equivariant.len()
    }

    pub fn kahler_count(&self) -> usize {
        self.kahler.len()
    }

    pub fn equivariant_names(&self) -> &[String] {
        &self.equivariant
    }

    pub fn hbar_name(&self) -> &str {
        &self.hbar
    }

    pub fn kahler_names(&self) -> &[String] {
        &self.kahler
    }

    pub fn kahler_vars(&self) -> Vec<Var> {
        (0..self.kahler.len()).map(|j| Var::Kahler(j as u16)).collect()
    }

    pub fn equivariant_vars(&self) -> Vec<Var> {
        (0..self.equivariant.len()).map(|i| Var::Equivariant(i as u16)).collect()
    }

    pub fn name(&self, v: Var) -> String {
        match v {
            Var::Equivariant(i) => self
                .equivariant
                .get(i as usize)
                .cloned()
                .unwrap_or_else(|| format!("a{}", i + 1)),
            Var::Hbar => self.hbar.clone(),
            Var::Kahler(j) => self
                .kahler
                .get(j as usize)
                .cloned()
                .unwrap_or_else(|| format!("z{}", j + 1)),
        }
    }

    pub fn lookup(&self, name: &str) -> Option<Var> {
        if name == self.hbar {
            return Some(Var::Hbar);
        }
        if let Some(i) = self.equivariant.iter().position(|n| n == name) {
            return Some(Var::Equivariant(i as u16));
        }
        self.kahler.iter().position(|n| n == name).map(|j| Var::Kahler(j as u16))
    }
}

/// A Laurent monomial with half-integer exponents (stored doubled).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: BTreeMap<Var, i64>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: Var) -> Self {
        Self::from_doubled([(v, 2)])
    }

    /// Builds a monomial from `(variable, doubled exponent)` pairs.
    pub fn from_doubled(pairs: impl IntoIterator<Item = (Var, i64)>) -> Self {
        let mut m = Self::one();
        for (v, d) in pairs {
            m.add_doubled(v, d);
        }
        m
    }

    /// Builds a monomial from integer exponents.
    pub fn from_ints(pairs: impl IntoIterator<Item = (Var, i64)>) -> Self {
        Self::from_doubled(pairs.into_iter().map(|(v, e)| (v, 2 * e)))
    }

    pub fn from_exponents(pairs: impl IntoIterator<Item = (Var, Q)>) -> Result<Self> {
        let mut m = Self::one();
        for (v, e) in pairs {
            m.add_doubled(v, rat::to_doubled(e)?);
        }
        Ok(m)
    }

    fn add_doubled(&mut self, v: Var, d: i64) {
        if d == 0 {
            return;
        }
        let e = self.exps.entry(v).or_insert(0);
        *e += d;
        if *e == 0 {
            self.exps.remove(&v);
        }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn doubled(&self, v: Var) -> i64 {
        self.exps.get(&v).copied().unwrap_or(0)
    }

    pub fn exponent(&self, v: Var) -> Q {
        rat::from_doubled(self.doubled(v))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, i64)> + '_ {
        self.exps.iter().map(|(v, d)| (*v, *d))
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.exps.keys().copied()
    }

    /// True when every exponent is an integer.
    pub fn is_integral(&self) -> bool {
        self.exps.values().all(|d| d % 2 == 0)
    }

    pub fn inv(&self) -> Self {
        Self { exps: self.exps.iter().map(|(v, d)| (*v, -d)).collect() }
    }

    pub fn pow(&self, k: i64) -> Self {
        if k == 0 {
            return Self::one();
        }
        Self { exps: self.exps.iter().map(|(v, d)| (*v, d * k)).collect() }
    }

    /// `m^{1/2}`; requires integral exponents.
    pub fn sqrt(&self) -> Result<Self> {
        if !self.is_integral() {
            return Err(Error::NonIntegralExponent(format!("{self:?}")));
        }
        Ok(Self { exps: self.exps.iter().map(|(v, d)| (*v, d / 2)).collect() })
    }

    /// `m^{p/2}` for integral `m`.
    pub fn half_pow(&self, p: i64) -> Result<Self> {
        Ok(self.sqrt()?.pow(p))
    }

    /// Keeps only the variables satisfying `keep`.
    pub fn restrict(&self, keep: impl Fn(Var) -> bool) -> Self {
        Self { exps: self.exps.iter().filter(|(v, _)| keep(**v)).map(|(v, d)| (*v, *d)).collect() }
    }

    pub fn equivariant_part(&self) -> Self {
        self.restrict(Var::is_equivariant)
    }

    pub fn involves(&self, keep: impl Fn(Var) -> bool) -> bool {
        self.exps.keys().any(|v| keep(*v))
    }

    /// `<equivariant exponent, w>`; entries of `w` beyond its length count as 0.
    pub fn pairing(&self, w: &[Q]) -> Q {
        self.exps.iter().fold(Q::zero(), |acc, (v, d)| match v {
            Var::Equivariant(i) => match w.get(*i as usize) {
                Some(wi) => acc + rat::from_doubled(*d) * wi,
                None => acc,
            },
            _ => acc,
        })
    }

    pub fn display<'a>(&'a self, vars: &'a VariableSet) -> impl fmt::Display + 'a {
        serial::MonomialDisplay { m: self, vars }
    }

    /// Evaluates at the point whose variables have the given square roots.
    pub fn eval_sqrt(&self, sqrt_of: &impl Fn(Var) -> Complex64) -> Complex64 {
        self.exps
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, (v, d)| acc * sqrt_of(*v).powi(*d as i32))
    }
}

impl Ord for Monomial {
    /// Lexicographic on exponent vectors in variable order; absent means 0.
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.exps.iter().peekable();
        let mut b = other.exps.iter().peekable();
        loop {
            let (ea, eb) = match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                (Some(&(va, &da)), Some(&(vb, &db))) => match va.cmp(vb) {
                    Ordering::Less => {
                        a.next();
                        (da, 0)
                    }
                    Ordering::Greater => {
                        b.next();
                        (0, db)
                    }
                    Ordering::Equal => {
                        a.next();
                        b.next();
                        (da, db)
                    }
                },
                (Some(&(_, &da)), None) => {
                    a.next();
                    (da, 0)
                }
                (None, Some(&(_, &db))) => {
                    b.next();
                    (0, db)
                }
            };
            match ea.cmp(&eb) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Mul for &Monomial {
    type Output = Monomial;
    fn mul(self, rhs: &Monomial) -> Monomial {
        let mut out = self.clone();
        for (v, d) in rhs.iter() {
            out.add_doubled(v, d);
        }
        out
    }
}

impl Mul for Monomial {
    type Output = Monomial;
    fn mul(self, rhs: Monomial) -> Monomial {
        &self * &rhs
    }
}

/// A chamber in the real Lie algebra of the equivariant torus, given by a
/// direction vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    direction: Vec<Q>,
}

impl Chamber {
    pub fn new(direction: Vec<Q>) -> Result<Self> {
        if direction.iter().all(|d| d.is_zero()) {
            return Err(Error::InvalidArgument("chamber direction is zero".into()));
        }
        Ok(Self { direction })
    }

    pub fn direction(&self) -> &[Q] {
        &self.direction
    }

    pub fn flipped(&self) -> Self {
        Self { direction: self.direction.iter().map(|d| -d).collect() }
    }

    /// Sign of the monomial's equivariant exponent against the direction.
    pub fn sign(&self, m: &Monomial) -> i32 {
        rat::sign(m.pairing(&self.direction))
    }
}

/// Positive, zero and negative parts of a character relative to a chamber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberSplit {
    pub positive: Character,
    pub zero: Character,
    pub negative: Character,
}

/// A finite integer combination of monomials. Zero multiplicities are never
/// stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    terms: BTreeMap<Monomial, i64>,
}

impl Character {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, 1)
    }

    pub fn term(m: Monomial, c: i64) -> Self {
        let mut out = Self::zero();
        out.add_term(m, c);
        out
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, i64)>) -> Self {
        let mut out = Self::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    /// `1 - m`.
    pub fn one_minus(m: &Monomial) -> Self {
        Self::from_terms([(Monomial::one(), 1), (m.clone(), -1)])
    }

    pub fn add_term(&mut self, m: Monomial, c: i64) {
        if c == 0 {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if *slot.get() == 0 {
                    slot.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub fn multiplicity(&self, m: &Monomial) -> i64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    /// The single monomial with coefficient, if the character has one term.
    pub fn as_single_term(&self) -> Option<(&Monomial, i64)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (m, *c))
        } else {
            None
        }
    }

    pub fn scale(&self, c: i64) -> Self {
        if c == 0 {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Self { terms: self.terms.iter().map(|(t, c)| (t * m, *c)).collect() }
    }

    pub fn map_monomials(&self, f: impl Fn(&Monomial) -> Monomial) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (f(m), *c)))
    }

    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Self {
        Self { terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), *c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Negates every exponent, `hbar` and Kähler variables included.
    pub fn conjugate(&self) -> Self {
        self.map_monomials(Monomial::inv)
    }

    /// Sum of multiplicities.
    pub fn rank(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Product of monomials raised to their multiplicities.
    pub fn determinant(&self) -> Monomial {
        self.terms.iter().fold(Monomial::one(), |acc, (m, c)| &acc * &m.pow(*c))
    }

    pub fn chamber_split(&self, chamber: &Chamber) -> ChamberSplit {
        let mut split = ChamberSplit { positive: Self::zero(), zero: Self::zero(), negative: Self::zero() };
        for (m, c) in &self.terms {
            let part = match chamber.sign(m) {
                1 => &mut split.positive,
                0 => &mut split.zero,
                _ => &mut split.negative,
            };
            part.terms.insert(m.clone(), *c);
        }
        split
    }

    /// `sum_terms mult * floor(<exponent, w>)`, linear in the character.
    pub fn floor_pairing(&self, w: &[Q]) -> i64 {
        self.terms.iter().map(|(m, c)| c * rat::floor(m.pairing(w))).sum()
    }

    /// Terms whose equivariant exponent pairs integrally with `w`.
    pub fn invariant_part(&self, w: &[Q]) -> Self {
        self.filter(|m| m.pairing(w).is_integer())
    }

    /// Sets `hbar` and the Kähler variables to 1.
    pub fn equivariant_character(&self) -> Self {
        self.map_monomials(Monomial::equivariant_part)
    }

    /// `prod (m^{1/2} - m^{-1/2})^mult`.
    pub fn s_hat(&self) -> Result<RationalExpr> {
        let mut num = Self::one();
        let mut den = Vec::new();
        for (m, c) in &self.terms {
            let half = m.sqrt()?;
            let factor = Self::from_terms([(half.clone(), 1), (half.inv(), -1)]);
            if *c > 0 {
                num = &num * &factor.pow(*c as u32);
            } else {
                if factor.is_zero() {
                    return Err(Error::DivisionByZero("s_hat of a negative trivial term".into()));
                }
                den.extend(std::iter::repeat_n(factor, c.unsigned_abs() as usize));
            }
        }
        RationalExpr::with_factors(num, den)
    }

    /// `prod (1 - m)^mult`.
    pub fn exterior_euler(&self) -> Result<RationalExpr> {
        let mut num = Self::one();
        let mut den = Vec::new();
        for (m, c) in &self.terms {
            let factor = Self::one_minus(m);
            if *c > 0 {
                num = &num * &factor.pow(*c as u32);
            } else {
                if factor.is_zero() {
                    return Err(Error::DivisionByZero("exterior Euler class of a negative trivial term".into()));
                }
                den.extend(std::iter::repeat_n(factor, c.unsigned_abs() as usize));
            }
        }
        RationalExpr::with_factors(num, den)
    }

    /// Lowest (or highest) exponent of `v` together with its coefficient.
    pub fn extreme_in(&self, v: Var, lowest: bool) -> Option<(i64, Self)> {
        let pick = if lowest {
            self.terms.keys().map(|m| m.doubled(v)).min()?
        } else {
            self.terms.keys().map(|m| m.doubled(v)).max()?
        };
        let coeff = Self::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.doubled(v) == pick)
                .map(|(m, c)| (m.restrict(|u| u != v), *c)),
        );
        Some((pick, coeff))
    }

    /// Range of doubled exponents of `v`.
    pub fn degree_span(&self, v: Var) -> Option<(i64, i64)> {
        let lo = self.terms.keys().map(|m| m.doubled(v)).min()?;
        let hi = self.terms.keys().map(|m| m.doubled(v)).max()?;
        Some((lo, hi))
    }

    pub fn involves(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.doubled(v) != 0)
    }

    pub fn eval_sqrt(&self, sqrt_of: &impl Fn(Var) -> Complex64) -> Complex64 {
        self.terms
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, (m, c)| acc + m.eval_sqrt(sqrt_of) * (*c as f64))
    }

    pub fn display<'a>(&'a self, vars: &'a VariableSet) -> impl fmt::Display + 'a {
        serial::CharacterDisplay { c: self, vars }
    }
}

impl From<Monomial> for Character {
    fn from(m: Monomial) -> Self {
        Self::monomial(m)
    }
}

impl Add for &Character {
    type Output = Character;
    fn add(self, rhs: &Character) -> Character {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }
}

impl Sub for &Character {
    type Output = Character;
    fn sub(self, rhs: &Character) -> Character {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &Character {
    type Output = Character;
    fn neg(self) -> Character {
        self.scale(-1)
    }
}

impl Mul for &Character {
    type Output = Character;
    fn mul(self, rhs: &Character) -> Character {
        let mut acc: BTreeMap<Monomial, i64> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                *acc.entry(m1 * m2).or_insert(0) += c1 * c2;
            }
        }
        acc.retain(|_, c| *c != 0);
        Character { terms: acc }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Character {
            type Output = Character;
            fn $method(self, rhs: Character) -> Character {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Character {
    type Output = Character;
    fn neg(self) -> Character {
        self.scale(-1)
    }
}
