use std::fmt;

use num_traits::Zero;

use super::{theta_series, ThetaArgument};
use crate::charalg::{Character, Monomial, RationalExpr, Var, VariableSet};
use crate::error::{Error, Result};
use crate::rat::{self, Q};

/// The `q -> 0` limit `prefactor * value` of a theta ratio.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitResult {
    pub prefactor: Monomial,
    pub value: RationalExpr,
}

impl LimitResult {
    pub fn zero() -> Self {
        Self { prefactor: Monomial::one(), value: RationalExpr::zero() }
    }

    pub fn combined(&self) -> RationalExpr {
        self.value.mul_monomial(&self.prefactor)
    }

    pub fn display<'a>(&'a self, vars: &'a VariableSet) -> impl fmt::Display + 'a {
        LimitDisplay { r: self, vars }
    }
}

struct LimitDisplay<'a> {
    r: &'a LimitResult,
    vars: &'a VariableSet,
}

impl fmt::Display for LimitDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] * ({})", self.r.prefactor.display(self.vars), self.r.value.display(self.vars))
    }
}

/// Leading term of one theta factor: `sign * mu * (1 - m)^{binomial}`.
struct Leading {
    valuation: Q,
    sign: i64,
    mu: Monomial,
    binomial: Option<Monomial>,
}

fn leading(arg: &ThetaArgument) -> Result<Leading> {
    // Every theta valuation is <= 0, so order 1 always exposes it.
    let series = theta_series(arg, rat::int(1))?;
    let Some((valuation, coeff)) = series.leading() else {
        return Err(Error::LimitUndefined(format!(
            "theta of q^{} vanishes identically",
            rat::format_q(arg.q_shift())
        )));
    };
    if let Some((mu, c)) = coeff.as_single_term() {
        if c.abs() == 1 {
            return Ok(Leading { valuation, sign: c, mu: mu.clone(), binomial: None });
        }
    }
    let m = arg.monomial();
    if coeff.len() == 2 {
        for (mu, c) in coeff.terms() {
            if coeff.multiplicity(&(mu * m)) == -c && c.abs() == 1 {
                return Ok(Leading { valuation, sign: c, mu: mu.clone(), binomial: Some(m.clone()) });
            }
        }
    }
    Err(Error::LimitUndefined(format!("unexpected leading coefficient {coeff:?}")))
}

/// Exact `q -> 0` limit of `prod theta(num) / prod theta(den)`.
///
/// A ratio with a higher numerator valuation tends to zero; a lower one is a
/// pole in `q` and is rejected.
pub fn theta_ratio_limit(num: &[ThetaArgument], den: &[ThetaArgument]) -> Result<LimitResult> {
    let num: Vec<Leading> = num.iter().map(leading).collect::<Result<_>>()?;
    let den: Vec<Leading> = den.iter().map(leading).collect::<Result<_>>()?;
    let vn: Q = num.iter().map(|l| l.valuation).fold(Q::zero(), |a, b| a + b);
    let vd: Q = den.iter().map(|l| l.valuation).fold(Q::zero(), |a, b| a + b);
    if vn > vd {
        return Ok(LimitResult::zero());
    }
    if vn < vd {
        return Err(Error::LimitUndefined(format!(
            "pole of order {} in q",
            rat::format_q(vd - vn)
        )));
    }
    let mut prefactor = Monomial::one();
    let mut sign = 1;
    for l in &num {
        prefactor = &prefactor * &l.mu;
        sign *= l.sign;
    }
    for l in &den {
        prefactor = &prefactor * &l.mu.inv();
        sign *= l.sign;
    }
    let binomials = |ls: &[Leading]| -> Vec<Character> {
        ls.iter().filter_map(|l| l.binomial.as_ref().map(Character::one_minus)).collect()
    };
    let mut top = binomials(&num);
    top.push(Character::constant(sign));
    let value = RationalExpr::from_factors(top, binomials(&den))?;
    Ok(LimitResult { prefactor, value })
}

/// Closed form of `lim theta(z a q^w) / theta(a q^w)`:
/// `z^{-floor(w) - 1/2}`, times `(1 - z a) / (1 - a)` when `w` is integral.
pub fn shift_law_closed_form(w: Q) -> LimitResult {
    let a = Monomial::var(Var::Equivariant(0));
    let z = Monomial::var(Var::Kahler(0));
    let prefactor = Monomial::from_doubled([(Var::Kahler(0), -2 * rat::floor(w) - 1)]);
    let value = if rat::is_integer(w) {
        RationalExpr::from_factors(vec![Character::one_minus(&(&z * &a))], vec![Character::one_minus(&a)])
            .expect("1 - a is nonzero")
    } else {
        RationalExpr::one()
    };
    LimitResult { prefactor, value }
}

/// Compares [`theta_ratio_limit`] on `theta(z a q^w) / theta(a q^w)` with
/// [`shift_law_closed_form`].
pub fn verify_shift_law(w: Q) -> Result<bool> {
    let a = Monomial::var(Var::Equivariant(0));
    let za = &Monomial::var(Var::Kahler(0)) * &a;
    let r = theta_ratio_limit(&[ThetaArgument::new(za, w)?], &[ThetaArgument::new(a, w)?])?;
    let want = shift_law_closed_form(w);
    Ok(r.prefactor == want.prefactor && r.value.equals(&want.value))
}
