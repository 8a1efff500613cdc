use num_complex::Complex64;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::sample::{random_expression, SampleConfig};
use super::*;
use crate::charalg::Character;
use crate::rat::{int, q};

const A: Var = Var::Equivariant(0);
const Z: Var = Var::Kahler(0);

fn mono(pairs: &[(Var, i64)]) -> Monomial {
    Monomial::from_ints(pairs.iter().copied())
}

fn th(pairs: &[(Var, i64)], s: Q) -> ThetaArgument {
    ThetaArgument::new(mono(pairs), s).unwrap()
}

fn th0(pairs: &[(Var, i64)]) -> ThetaArgument {
    th(pairs, Q::zero())
}

/// theta(az)/(theta(a)theta(z)) + theta(a^2 z)theta(a)/(theta(a^2)theta(az)).
fn two_term_example() -> BalancedExpression {
    BalancedExpression::new(vec![
        BalancedTerm::new(Monomial::one(), vec![th0(&[(A, 1), (Z, 1)])], vec![th0(&[(A, 1)]), th0(&[(Z, 1)])]),
        BalancedTerm::new(
            Monomial::one(),
            vec![th0(&[(A, 2), (Z, 1)]), th0(&[(A, 1)])],
            vec![th0(&[(A, 2)]), th0(&[(A, 1), (Z, 1)])],
        ),
    ])
}

fn single(num: Vec<ThetaArgument>, den: Vec<ThetaArgument>) -> BalancedExpression {
    BalancedExpression::new(vec![BalancedTerm::new(Monomial::one(), num, den)])
}

fn sqrt_point(v: Var) -> Complex64 {
    match v {
        Var::Equivariant(i) => Complex64::from_polar(1.3 + 0.2 * i as f64, 0.4 + 0.3 * i as f64),
        Var::Hbar => Complex64::from_polar(0.8, -0.7),
        Var::Kahler(j) => Complex64::from_polar(1.1 + 0.15 * j as f64, 1.1 - 0.2 * j as f64),
    }
}

fn exact_at_point(ql: &QLimit) -> Complex64 {
    ql.combined().eval_sqrt(&sqrt_point)
}

#[test]
fn balance_predicates_on_the_two_term_example() {
    let e = two_term_example();
    assert!(e.is_balanced_in(&[A]));
    assert!(!e.is_balanced_in(&[A, Z]));
    assert!(BalancedExpression::new(vec![BalancedTerm::new(Monomial::one(), vec![], vec![])]).is_balanced_in(&[A, Z]));
    assert!(!e.has_separated_poles());
    assert!(!single(vec![], vec![th0(&[(A, 1), (Z, 1)])]).has_separated_poles());
    assert!(single(vec![th0(&[(A, 1), (Z, 1)])], vec![]).has_separated_poles());
    assert!(single(vec![], vec![th0(&[(A, 1), (Var::Hbar, 1)]), th0(&[(Z, 1), (Var::Hbar, -1)])]).has_separated_poles());
}

#[test]
fn quasiperiod_index_examples() {
    let e = two_term_example();
    assert_eq!(e.terms[0].pairing().get(0, 0), 1);
    assert_eq!(e.terms[1].pairing().get(0, 0), 1);
    let p = e.quasiperiod_index().unwrap();
    assert_eq!(p.to_dense(1, 1), vec![vec![1]]);
    assert_eq!(p.z_correction(&[q(1, 3)], 1), vec![q(1, 3)]);
    assert!(BalancedExpression::new(vec![BalancedTerm::new(mono(&[(A, 1)]), vec![], vec![])])
        .quasiperiod_index()
        .unwrap()
        .is_zero());
    assert!(BalancedExpression::default().quasiperiod_index().unwrap().is_zero());

    let mut bad = two_term_example();
    bad.terms[1].num[0] = th0(&[(A, 2), (Z, 2)]);
    assert!(matches!(bad.quasiperiod_index(), Err(Error::InconsistentBundle(_))));

    let mut hbar_mismatch = two_term_example();
    hbar_mismatch.terms[0].num.push(th0(&[(A, 1), (Var::Hbar, 1)]));
    hbar_mismatch.terms[0].den.push(th0(&[(A, 1)]));
    assert!(matches!(hbar_mismatch.quasiperiod_index(), Err(Error::InconsistentBundle(_))));
}

#[test]
fn shift_examples() {
    let e = single(vec![th0(&[(Z, 1), (A, 1)])], vec![th0(&[(A, 1)])]);
    let s = e.shift_equivariant(&[q(1, 2)]);
    assert_eq!(s, single(vec![th(&[(Z, 1), (A, 1)], q(1, 2))], vec![th(&[(A, 1)], q(1, 2))]));
    assert_eq!(e.shift_equivariant(&[Q::zero()]), e);
    let two = two_term_example();
    assert_eq!(
        two.shift_equivariant(&[q(1, 3)]).shift_equivariant(&[q(-5, 6)]),
        two.shift_equivariant(&[q(-1, 2)])
    );
}

#[test]
fn q_limit_examples() {
    let e = single(vec![th(&[(Z, 1), (A, 1)], q(1, 2))], vec![th(&[(A, 1)], q(1, 2))]);
    let ql = e.q_limit(&[Q::zero()]).unwrap();
    assert_eq!(ql.normalization, Monomial::from_doubled([(Z, -1)]));
    assert!(ql.value.equals(&RationalExpr::one()));

    let ql = BalancedExpression::default().q_limit(&[]).unwrap();
    assert!(ql.normalization.is_one() && ql.value.is_zero());

    let ql = two_term_example().q_limit(&[Q::zero()]).unwrap();
    let om = |pairs: &[(Var, i64)]| Character::one_minus(&mono(pairs));
    let first = RationalExpr::from_factors(
        vec![Character::constant(-1), om(&[(A, 1), (Z, 1)])],
        vec![om(&[(A, 1)]), om(&[(Z, 1)])],
    )
    .unwrap();
    let second = RationalExpr::from_factors(
        vec![om(&[(A, 2), (Z, 1)]), om(&[(A, 1)])],
        vec![om(&[(A, 2)]), om(&[(A, 1), (Z, 1)])],
    )
    .unwrap();
    assert!(ql.normalization.is_one());
    assert!(ql.value.equals(&(&first + &second)));

    let numeric = two_term_example().eval_numeric(&sqrt_point, 1e-4, 1e-15).unwrap();
    let exact = exact_at_point(&ql);
    assert!((numeric - exact).norm() / exact.norm() < 1e-3);
}

#[test]
fn q_limit_errors() {
    let unbalanced = single(vec![th0(&[(A, 1)])], vec![]);
    assert!(matches!(unbalanced.q_limit(&[Q::zero()]), Err(Error::LimitUndefined(_))));
    // The two terms normalize to z^{-1/2} and 1.
    let mismatch = BalancedExpression::new(vec![
        BalancedTerm::new(Monomial::one(), vec![th0(&[(Z, 1), (A, 1)])], vec![th0(&[(A, 1)])]),
        BalancedTerm::new(Monomial::one(), vec![], vec![]),
    ]);
    assert!(matches!(mismatch.q_limit(&[Q::zero()]), Err(Error::NormalizationMismatch(_))));
}

#[test]
fn z_limit_examples() {
    let inf = KahlerChamber::uniform(KahlerDirection::ToInfinity, 1).unwrap();
    let zero = KahlerChamber::uniform(KahlerDirection::ToZero, 1).unwrap();
    let z_minus_hbar = Character::from_terms([(mono(&[(Z, 1)]), 1), (mono(&[(Var::Hbar, 1)]), -1)]);
    let z_minus_one = Character::from_terms([(mono(&[(Z, 1)]), 1), (Monomial::one(), -1)]);
    let v = RationalExpr::from_factors(vec![z_minus_hbar], vec![z_minus_one])
        .unwrap()
        .mul_monomial(&Monomial::from_doubled([(Z, 1)]));
    assert!(z_limit(&v, &inf, &[q(-1, 2)]).unwrap().equals(&RationalExpr::one()));
    assert!(matches!(z_limit(&v, &inf, &[Q::zero()]), Err(Error::DivergentLimit(_))));
    assert!(z_limit(&v, &inf, &[int(-1)]).unwrap().is_zero());

    let flat = RationalExpr::from_factors(vec![Character::one_minus(&mono(&[(A, 1)]))], vec![]).unwrap();
    assert!(z_limit(&flat, &zero, &[]).unwrap().equals(&flat));

    let v = RationalExpr::from_factors(
        vec![Character::one_minus(&mono(&[(A, 1), (Z, 1)]))],
        vec![Character::one_minus(&mono(&[(A, 1)]))],
    )
    .unwrap()
    .mul_monomial(&Monomial::from_doubled([(Z, -1)]));
    let expected = RationalExpr::from_factors(vec![], vec![Character::one_minus(&mono(&[(A, 1)]))]).unwrap();
    assert!(z_limit(&v, &zero, &[q(1, 2)]).unwrap().equals(&expected));
    assert!(z_limit(&v, &zero, &[q(1, 3)]).is_err());
}

#[test]
fn chamber_parsing() {
    let c: KahlerChamber = "0, inf".parse().unwrap();
    assert_eq!(c.directions(), &[KahlerDirection::ToZero, KahlerDirection::ToInfinity]);
    assert!("sideways".parse::<KahlerChamber>().is_err());
}

#[test]
fn json_round_trip() {
    let vars = VariableSet::default();
    let e = two_term_example().shift_equivariant(&[q(-2, 3)]);
    let json = serde_json::to_string(&e.to_json(&vars)).unwrap();
    let back: BalancedExpressionJson = serde_json::from_str(&json).unwrap();
    assert_eq!(BalancedExpression::from_json(&back, &vars).unwrap(), e);
    let parsed: BalancedExpressionJson =
        serde_json::from_str(r#"{"terms":[{"num":[{"exp":{"a":1,"z":"1"}}],"den":[{"exp":{"a":1},"qshift":"1/2"}]}]}"#)
            .unwrap();
    let e = BalancedExpression::from_json(&parsed, &vars).unwrap();
    assert_eq!(e.terms[0].den[0].q_shift(), q(1, 2));
    assert!(serde_json::from_str::<BalancedExpressionJson>(r#"{"terms":[{"nums":[]}]}"#).is_err());
}

#[test]
fn display_lists_factors() {
    let vars = VariableSet::default();
    let e = single(vec![th(&[(A, 1), (Z, 1)], q(1, 2))], vec![th0(&[(A, 1)])]);
    assert_eq!(e.display(&vars).to_string(), "[1] * theta(a^1 * z^1; q^1/2) / theta(a^1; q^0)");
}

/// Error of the numeric section at `q` relative to its exact limit.
fn relative_error(e: &BalancedExpression, w: &[Q], qv: f64) -> f64 {
    let exact = exact_at_point(&e.q_limit(w).unwrap());
    let numeric = e.shift_equivariant(w).eval_numeric(&sqrt_point, qv, 1e-16).unwrap();
    (numeric - exact).norm() / exact.norm().max(1e-300)
}

#[test]
fn numeric_sections_converge_at_the_expected_rate() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let (e, _) = random_expression(&mut rng, &SampleConfig::default());
        for w in [q(1, 2), q(-1, 3), q(5, 6), int(1)] {
            let errs: Vec<f64> = [1e-3, 1e-4, 1e-5].iter().map(|&qv| relative_error(&e, &[w], qv)).collect();
            // Corrections are O(q^{1/6}) at worst for denominators up to 6.
            assert!(errs[2] < errs[0], "w = {w}: {errs:?}");
            let rate = (errs[0] / errs[2]).log10() / 2.0;
            assert!(rate > 1.0 / 6.0 - 0.05, "w = {w}: rate {rate}, {errs:?}");
        }
    }
}

fn small_w() -> impl Strategy<Value = Q> {
    (1i64..=6).prop_flat_map(|d| (-3 * d..=3 * d).prop_map(move |n| q(n, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_sections_have_limits(seed in any::<u64>(), w in small_w()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (e, target) = random_expression(&mut rng, &SampleConfig::default());
        prop_assert!(e.is_balanced_in_equivariant());
        prop_assert!(e.has_separated_poles());
        prop_assert!(e.terms.iter().all(|t| t.num.len() + t.den.len() <= 6));
        prop_assert_eq!(e.quasiperiod_index().unwrap(), target);
        prop_assert!(e.q_limit(&[w]).is_ok());
        for dir in [KahlerDirection::ToZero, KahlerDirection::ToInfinity] {
            let chamber = KahlerChamber::uniform(dir, 1).unwrap();
            prop_assert!(e.corrected_limit(&[w], &chamber).is_ok());
        }
    }

    #[test]
    fn integral_shifts_multiply_by_a_pairing_monomial(seed in any::<u64>(), w in small_w(), k in -2i64..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cfg = SampleConfig { equivariant: 2, kahler: 2, ..SampleConfig::default() };
        let (e, p) = random_expression(&mut rng, &cfg);
        let base = e.q_limit(&[w, Q::zero()]).unwrap().combined();
        let moved = e.q_limit(&[w + int(k), Q::zero()]).unwrap().combined();
        let factor = p.shift_monomial(&[k, 0]);
        prop_assert!(!factor.involves(Var::is_equivariant));
        prop_assert!(moved.equals(&base.mul_monomial(&factor)));
    }
}


/// At w = 0 both Kähler limits exist; at w = 1/2 the second term's
/// `z^{-1}` normalization survives the `z^{1/2}` correction in both
/// directions, because theta(az) sits in a denominator.
#[test]
fn two_term_example_kahler_limits() {
    let e = two_term_example();
    for dir in [KahlerDirection::ToZero, KahlerDirection::ToInfinity] {
        let chamber = KahlerChamber::uniform(dir, 1).unwrap();
        assert!(e.corrected_limit(&[Q::zero()], &chamber).is_ok());
        assert!(matches!(e.corrected_limit(&[q(1, 2)], &chamber), Err(Error::DivergentLimit(_))));
    }
}
