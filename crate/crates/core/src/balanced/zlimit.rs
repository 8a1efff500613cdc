use std::str::FromStr;

use num_traits::Zero;

use crate::charalg::{Character, RationalExpr, Var};
use crate::error::{Error, Result};
use crate::rat::{self, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KahlerDirection {
    ToZero,
    ToInfinity,
}

/// One limit direction per Kähler variable: a coordinate cone standing in
/// for a chamber of the Kähler torus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KahlerChamber {
    directions: Vec<KahlerDirection>,
}

impl KahlerChamber {
    pub fn new(directions: Vec<KahlerDirection>) -> Result<Self> {
        if directions.is_empty() {
            return Err(Error::InvalidArgument("Kähler chamber needs at least one direction".into()));
        }
        Ok(Self { directions })
    }

    pub fn uniform(direction: KahlerDirection, kahler: usize) -> Result<Self> {
        Self::new(vec![direction; kahler])
    }

    pub fn directions(&self) -> &[KahlerDirection] {
        &self.directions
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }
}

impl FromStr for KahlerChamber {
    type Err = Error;

    /// Comma-separated `0` / `inf` entries.
    fn from_str(s: &str) -> Result<Self> {
        let dirs = s
            .split(',')
            .map(|p| match p.trim() {
                "0" | "zero" => Ok(KahlerDirection::ToZero),
                "inf" | "infinity" => Ok(KahlerDirection::ToInfinity),
                other => Err(Error::Parse(format!("unknown Kähler direction {other:?}"))),
            })
            .collect::<Result<_>>()?;
        Self::new(dirs)
    }
}

/// `z^{correction} * value` with every Kähler variable sent to its chamber
/// limit, one variable at a time in index order.
///
/// Correction exponents may be arbitrary rationals; only the sign of the
/// total valuation in each variable decides between zero, a finite leading
/// coefficient and divergence.
pub fn z_limit(value: &RationalExpr, chamber: &KahlerChamber, correction: &[Q]) -> Result<RationalExpr> {
    if correction.len() > chamber.len() {
        return Err(Error::InvalidArgument(format!(
            "{} correction exponents for a chamber in {} variables",
            correction.len(),
            chamber.len()
        )));
    }
    let mut current = value.clone();
    for (j, dir) in chamber.directions().iter().enumerate() {
        if current.is_zero() {
            return Ok(current);
        }
        let v = Var::Kahler(j as u16);
        let lowest = *dir == KahlerDirection::ToZero;
        let mut doubled = 0;
        let mut pick = |fs: &[Character], sign: i64| -> Vec<Character> {
            fs.iter()
                .map(|f| {
                    let (d, c) = f.extreme_in(v, lowest).expect("nonzero factor");
                    doubled += sign * d;
                    c
                })
                .collect()
        };
        let num = pick(current.numerator_factors(), 1);
        let den = pick(current.denominator_factors(), -1);
        let valuation = rat::from_doubled(doubled) + correction.get(j).copied().unwrap_or_else(Q::zero);
        let towards_zero = if lowest { valuation > Q::zero() } else { valuation < Q::zero() };
        if towards_zero {
            return Ok(RationalExpr::zero());
        }
        if !valuation.is_zero() {
            return Err(Error::DivergentLimit(format!(
                "corrected valuation {} in Kähler variable {j}",
                rat::format_q(valuation)
            )));
        }
        current = RationalExpr::from_factors(num, den)?;
    }
    Ok(current)
}
