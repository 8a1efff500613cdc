//! Truncated q-series, the odd theta function
//!
//! ```text
//! theta(x) = (x^{1/2} - x^{-1/2}) * prod_{i>=1} (1 - x q^i)(1 - q^i / x)
//! ```
//!
//! and exact extraction of `q -> 0` leading terms of theta ratios.

mod limit;
mod numeric;
mod series;

use num_traits::{Signed, Zero};

use crate::charalg::{Character, Monomial};
use crate::error::{Error, Result};
use crate::rat::{self, Q};

pub use limit::{shift_law_closed_form, theta_ratio_limit, verify_shift_law, LimitResult};
pub use numeric::{numeric_theta, numeric_theta_from_sqrt};
pub use series::QSeries;

/// The argument `monomial * q^{q_shift}` of a theta function.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ThetaArgument {
    monomial: Monomial,
    q_shift: Q,
}

impl ThetaArgument {
    /// The monomial must have integral exponents so that `x^{1/2}` is a
    /// half-integral monomial.
    pub fn new(monomial: Monomial, q_shift: Q) -> Result<Self> {
        if !monomial.is_integral() {
            return Err(Error::NonIntegralExponent(format!("theta argument {monomial:?}")));
        }
        Ok(Self { monomial, q_shift })
    }

    pub fn monomial(&self) -> &Monomial {
        &self.monomial
    }

    pub fn q_shift(&self) -> Q {
        self.q_shift
    }

    /// The argument after `a -> a q^w`.
    pub fn shifted(&self, w: &[Q]) -> Self {
        Self { monomial: self.monomial.clone(), q_shift: self.q_shift + self.monomial.pairing(w) }
    }
}

/// Expansion of `theta(arg)` with every coefficient below `order` exact.
///
/// Factors `1 - c q^e` with `e <= 0` are multiplied in exactly; the
/// remaining ones only feed the truncated tail.
pub fn theta_series(arg: &ThetaArgument, order: Q) -> Result<QSeries> {
    if order <= Q::zero() {
        return Err(Error::InvalidArgument(format!("series order {} must be positive", rat::format_q(order))));
    }
    let m = &arg.monomial;
    let s = arg.q_shift;
    let half = rat::q(1, 2);
    let root = m.sqrt()?;
    let mut lead = QSeries::exact([
        (s * half, Character::monomial(root.clone())),
        (-s * half, Character::term(root.inv(), -1)),
    ]);
    let m_inv = m.inv();
    let factor = |i: i64| {
        let i = rat::int(i);
        [(m.clone(), s + i), (m_inv.clone(), i - s)]
    };

    let last = rat::floor(s.abs()).max(0);
    for i in 1..=last {
        for (c, e) in factor(i) {
            if e <= Q::zero() {
                lead = lead.mul(&QSeries::one_minus(&c, e));
            }
        }
    }
    let Some(v) = lead.valuation() else {
        return Ok(QSeries::zero_to(order));
    };

    let tail_order = order - v;
    let mut tail = QSeries::one().truncate(tail_order);
    let mut i = 1;
    while rat::int(i) < tail_order + s.abs() {
        for (c, e) in factor(i) {
            if e > Q::zero() && e < tail_order {
                tail = tail.mul(&QSeries::one_minus(&c, e));
            }
        }
        i += 1;
    }
    Ok(lead.mul(&tail).truncate(order))
}

fn symbolic_x() -> Monomial {
    Monomial::var(crate::charalg::Var::Equivariant(0))
}

/// Checks `theta(1/x) = -theta(x)` below `order` for a formal variable `x`.
pub fn verify_oddness(order: Q) -> Result<bool> {
    let x = symbolic_x();
    let lhs = theta_series(&ThetaArgument::new(x.inv(), Q::zero())?, order)?;
    let rhs = theta_series(&ThetaArgument::new(x, Q::zero())?, order)?.neg();
    Ok(lhs.agrees_below(&rhs, order))
}

/// Checks `theta(x q) = -(x q^{1/2})^{-1} theta(x)` below `order`.
pub fn verify_quasiperiod(order: Q) -> Result<bool> {
    verify_quasiperiod_power(order, 1)
}

/// Checks `theta(x q^k) = (-1)^k x^{-k} q^{-k^2/2} theta(x)`, the k-fold
/// iterate of the quasiperiod relation.
pub fn verify_quasiperiod_power(order: Q, k: i64) -> Result<bool> {
    let x = symbolic_x();
    let shift = rat::q(k * k, 2);
    let lhs = theta_series(&ThetaArgument::new(x.clone(), rat::int(k))?, order)?;
    let base = theta_series(&ThetaArgument::new(x.clone(), Q::zero())?, order + shift)?;
    let sign = if k % 2 == 0 { 1 } else { -1 };
    let rhs = base.shift(-shift, &Character::term(x.pow(-k), sign));
    Ok(lhs.agrees_below(&rhs, order))
}
