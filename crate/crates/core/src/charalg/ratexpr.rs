use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::{Character, Monomial, Var, VariableSet};
use crate::error::{Error, Result};

/// A quotient of products of characters.
///
/// Numerator and denominator are kept as factor lists. Identical factors
/// cancel on construction and single-term factors are collected into one
/// leading unit, so products of binomials stay small. Sums expand the
/// numerator against the least common multiple of the denominator lists.
/// Equality is decided by cross-multiplication.
#[derive(Clone, Debug)]
pub struct RationalExpr {
    num: Vec<Character>,
    den: Vec<Character>,
}

impl RationalExpr {
    pub fn zero() -> Self {
        Self { num: vec![Character::zero()], den: Vec::new() }
    }

    pub fn one() -> Self {
        Self { num: Vec::new(), den: Vec::new() }
    }

    pub fn from_character(c: Character) -> Self {
        Self::from_factors(vec![c], Vec::new()).expect("no denominator")
    }

    pub fn from_monomial(m: Monomial) -> Self {
        Self::from_character(Character::monomial(m))
    }

    pub fn constant(c: i64) -> Self {
        Self::from_character(Character::constant(c))
    }

    /// `num / prod(den)`.
    pub fn with_factors(num: Character, den: Vec<Character>) -> Result<Self> {
        Self::from_factors(vec![num], den)
    }

    /// `prod(num) / prod(den)`.
    pub fn from_factors(num: Vec<Character>, den: Vec<Character>) -> Result<Self> {
        if den.iter().any(Character::is_zero) {
            return Err(Error::DivisionByZero("zero denominator factor".into()));
        }
        let mut out = Self { num, den };
        out.normalize();
        Ok(out)
    }

    fn normalize(&mut self) {
        if self.num.iter().any(Character::is_zero) {
            *self = Self::zero();
            return;
        }
        let mut unit_c: i64 = 1;
        let mut unit_m = Monomial::one();
        let mut num = Vec::new();
        for f in self.num.drain(..) {
            match f.as_single_term() {
                Some((m, c)) => {
                    unit_c *= c;
                    unit_m = &unit_m * m;
                }
                None => num.push(f),
            }
        }
        let mut den = Vec::new();
        for f in self.den.drain(..) {
            match f.as_single_term() {
                Some((m, c)) if c == 1 || c == -1 => {
                    unit_c *= c;
                    unit_m = &unit_m * &m.inv();
                }
                Some((m, c)) => {
                    unit_m = &unit_m * &m.inv();
                    den.push(Character::constant(c));
                }
                None => den.push(f),
            }
        }
        // cancel identical factors
        let mut i = 0;
        while i < num.len() {
            if let Some(j) = den.iter().position(|d| *d == num[i]) {
                den.swap_remove(j);
                num.swap_remove(i);
            } else {
                i += 1;
            }
        }
        num.sort();
        den.sort();
        if unit_c != 1 || !unit_m.is_one() {
            num.insert(0, Character::term(unit_m, unit_c));
        }
        self.num = num;
        self.den = den;
    }

    pub fn is_zero(&self) -> bool {
        self.num.len() == 1 && self.num[0].is_zero()
    }

    pub fn numerator_factors(&self) -> &[Character] {
        &self.num
    }

    pub fn denominator_factors(&self) -> &[Character] {
        &self.den
    }

    pub fn numerator(&self) -> Character {
        product(&self.num)
    }

    pub fn denominator(&self) -> Character {
        product(&self.den)
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let mut num = self.num.clone();
        num.push(Character::monomial(m.clone()));
        Self::from_factors(num, self.den.clone()).expect("denominator unchanged")
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut num = self.num.clone();
        num.push(Character::constant(c));
        Self::from_factors(num, self.den.clone()).expect("denominator unchanged")
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("reciprocal of zero".into()));
        }
        Self::from_factors(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    /// Cross-multiplied equality.
    pub fn equals(&self, other: &Self) -> bool {
        let lhs = &self.numerator() * &other.denominator();
        let rhs = &other.numerator() * &self.denominator();
        lhs == rhs
    }

    /// True when the expression is a Laurent polynomial (empty denominator).
    pub fn as_character(&self) -> Option<Character> {
        self.den.is_empty().then(|| self.numerator())
    }

    pub fn involves(&self, v: Var) -> bool {
        self.num.iter().chain(self.den.iter()).any(|f| f.involves(v))
    }

    pub fn eval_sqrt(&self, sqrt_of: &impl Fn(Var) -> Complex64) -> Complex64 {
        let n = self.num.iter().fold(Complex64::new(1.0, 0.0), |acc, f| acc * f.eval_sqrt(sqrt_of));
        let d = self.den.iter().fold(Complex64::new(1.0, 0.0), |acc, f| acc * f.eval_sqrt(sqrt_of));
        n / d
    }

    pub fn display<'a>(&'a self, vars: &'a VariableSet) -> impl fmt::Display + 'a {
        RationalDisplay { r: self, vars }
    }
}

fn product(fs: &[Character]) -> Character {
    fs.iter().fold(Character::one(), |acc, f| &acc * f)
}

impl PartialEq for RationalExpr {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl Mul for &RationalExpr {
    type Output = RationalExpr;
    fn mul(self, rhs: &RationalExpr) -> RationalExpr {
        let num = self.num.iter().chain(rhs.num.iter()).cloned().collect();
        let den = self.den.iter().chain(rhs.den.iter()).cloned().collect();
        RationalExpr::from_factors(num, den).expect("nonzero denominators")
    }
}

impl Add for &RationalExpr {
    type Output = RationalExpr;
    fn add(self, rhs: &RationalExpr) -> RationalExpr {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        // lcm of the two denominator multisets
        let mut rest_rhs = rhs.den.clone();
        let mut lcm = Vec::new();
        let mut extra_for_rhs = Vec::new();
        for f in &self.den {
            if let Some(j) = rest_rhs.iter().position(|g| g == f) {
                rest_rhs.swap_remove(j);
            } else {
                extra_for_rhs.push(f.clone());
            }
            lcm.push(f.clone());
        }
        let extra_for_lhs = rest_rhs.clone();
        lcm.extend(rest_rhs);
        let lhs_num = &self.numerator() * &product(&extra_for_lhs);
        let rhs_num = &rhs.numerator() * &product(&extra_for_rhs);
        RationalExpr::with_factors(&lhs_num + &rhs_num, lcm).expect("nonzero denominators")
    }
}

impl Neg for &RationalExpr {
    type Output = RationalExpr;
    fn neg(self) -> RationalExpr {
        self.scale(-1)
    }
}

impl Sub for &RationalExpr {
    type Output = RationalExpr;
    fn sub(self, rhs: &RationalExpr) -> RationalExpr {
        self + &(-rhs)
    }
}

impl Mul for RationalExpr {
    type Output = RationalExpr;
    fn mul(self, rhs: RationalExpr) -> RationalExpr {
        &self * &rhs
    }
}

impl Add for RationalExpr {
    type Output = RationalExpr;
    fn add(self, rhs: RationalExpr) -> RationalExpr {
        &self + &rhs
    }
}

impl From<Character> for RationalExpr {
    fn from(c: Character) -> Self {
        Self::from_character(c)
    }
}

struct RationalDisplay<'a> {
    r: &'a RationalExpr,
    vars: &'a VariableSet,
}

impl fmt::Display for RationalDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let write_product = |f: &mut fmt::Formatter<'_>, fs: &[Character]| -> fmt::Result {
            if fs.is_empty() {
                return write!(f, "1");
            }
            for (i, c) in fs.iter().enumerate() {
                if i > 0 {
                    write!(f, " * ")?;
                }
                write!(f, "({})", c.display(self.vars))?;
            }
            Ok(())
        };
        write_product(f, &self.r.num)?;
        if !self.r.den.is_empty() {
            write!(f, " / ")?;
            write_product(f, &self.r.den)?;
        }
        Ok(())
    }
}
