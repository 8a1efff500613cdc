//! Seeded random balanced sections for property tests.
//!
//! Every term is built from blocks that are balanced in the equivariant
//! variables and have separated poles:
//!
//! * mixed blocks `theta(a_i^n z_j^m hbar^k) / (theta(a_i^n) theta(z_j^m))`
//!   realising a target pairing `n m` between `a_i` and `z_j`,
//! * `theta(a_i hbar^d) / theta(a_i)`, which fixes the `a_i`-`hbar` pairing,
//! * `theta(z_j^m hbar^k) / theta(z_j^m)`, which pairs trivially.
//!
//! Terms share one target pairing but factor it differently, and the
//! prefactor, a monomial in `a` and `hbar` only, absorbs the `hbar^{1/2}`
//! powers so all terms normalize alike. A Kähler monomial in front would
//! grow in one of the two Kähler directions.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{BalancedExpression, BalancedTerm, PairingMatrix};
use crate::charalg::{Monomial, Var};
use crate::qtheta::ThetaArgument;

#[derive(Clone, Copy, Debug)]
pub struct SampleConfig {
    pub equivariant: usize,
    pub kahler: usize,
    pub max_terms: usize,
    pub max_factors: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self { equivariant: 1, kahler: 1, max_terms: 4, max_factors: 6 }
    }
}

fn theta(pairs: &[(Var, i64)]) -> ThetaArgument {
    ThetaArgument::new(Monomial::from_ints(pairs.iter().copied()), num_traits::Zero::zero())
        .expect("integral exponents")
}

/// A random section together with the pairing it was built to realise.
pub fn random_expression<R: Rng>(rng: &mut R, cfg: &SampleConfig) -> (BalancedExpression, PairingMatrix) {
    assert!(cfg.equivariant > 0 && cfg.kahler > 0 && cfg.max_factors >= 5);
    let a = |i: usize| Var::Equivariant(i as u16);
    let z = |j: usize| Var::Kahler(j as u16);
    let i0 = rng.gen_range(0..cfg.equivariant);
    let j0 = rng.gen_range(0..cfg.kahler);
    let p: i64 = *[-2, -1, 0, 1, 2].choose(rng).expect("nonempty");
    let h: i64 = rng.gen_range(-1..=1);

    let mut target = PairingMatrix::default();
    target.set(i0 as u16, Var::Kahler(j0 as u16), p);
    target.set(i0 as u16, Var::Hbar, h);

    let n_terms = rng.gen_range(1..=cfg.max_terms);
    let terms = (0..n_terms)
        .map(|_| {
            let mut num = Vec::new();
            let mut den = Vec::new();
            let mut hbar_pairing = 0;
            let mut hbar_total = 0;
            if p != 0 {
                let divisors: Vec<i64> = (1..=p.abs()).filter(|d| p % d == 0).collect();
                let d = *divisors.choose(rng).expect("nonempty");
                let n = if rng.gen_bool(0.5) { d } else { -d };
                let m = p / n;
                let k = rng.gen_range(-1..=1);
                num.push(theta(&[(a(i0), n), (Var::Hbar, k), (z(j0), m)]));
                den.push(theta(&[(a(i0), n)]));
                den.push(theta(&[(z(j0), m)]));
                hbar_pairing += n * k;
                hbar_total += k;
            }
            let deficit = h - hbar_pairing;
            if deficit != 0 {
                num.push(theta(&[(a(i0), 1), (Var::Hbar, deficit)]));
                den.push(theta(&[(a(i0), 1)]));
                hbar_total += deficit;
            }
            if num.len() + den.len() + 2 <= cfg.max_factors && rng.gen_bool(0.5) {
                let j = rng.gen_range(0..cfg.kahler);
                let m = *[-2, -1, 1, 2].choose(rng).expect("nonempty");
                let k = *[-1, 1].choose(rng).expect("nonempty");
                num.push(theta(&[(Var::Hbar, k), (z(j), m)]));
                den.push(theta(&[(z(j), m)]));
                hbar_total += k;
            }
            let mut pre: Vec<(Var, i64)> = vec![(Var::Hbar, 2 * rng.gen_range(-1..=1) + hbar_total)];
            pre.extend((0..cfg.equivariant).map(|i| (a(i), 2 * rng.gen_range(-1..=1))));
            num.shuffle(rng);
            den.shuffle(rng);
            BalancedTerm::new(Monomial::from_doubled(pre), num, den)
        })
        .collect();
    (BalancedExpression::new(terms), target)
}
