use super::*;
use crate::balanced::KahlerDirection;
use crate::hilbcomb::{partitions, SlopeGrid};
use crate::rat::{int, q};

const A: Var = Var::Equivariant(0);
const H: Var = Var::Hbar;
const Z: Var = Var::Kahler(0);

fn mono(pairs: &[(Var, i64)]) -> Monomial {
    Monomial::from_ints(pairs.iter().copied())
}

fn th(pairs: &[(Var, i64)]) -> ThetaArgument {
    ThetaArgument::new(mono(pairs), Q::zero()).unwrap()
}

fn om(pairs: &[(Var, i64)]) -> Character {
    Character::one_minus(&mono(pairs))
}

fn chamber(d: KahlerDirection) -> KahlerChamber {
    KahlerChamber::uniform(d, 1).unwrap()
}

fn single(num: Vec<ThetaArgument>, den: Vec<ThetaArgument>) -> BalancedExpression {
    BalancedExpression::new(vec![BalancedTerm::new(Monomial::one(), num, den)])
}

/// `theta(z a) theta(hbar) / (theta(a) theta(z hbar))`.
fn bundle_entry() -> BalancedExpression {
    single(vec![th(&[(Z, 1), (A, 1)]), th(&[(H, 1)])], vec![th(&[(A, 1)]), th(&[(Z, 1), (H, 1)])])
}

fn two_by_two(entry: BalancedExpression) -> RestrictionMatrix {
    let mut t = RestrictionMatrix::identity(VariableSet::default(), vec!["p".into(), "q".into()]);
    t.entries.insert((0, 1), entry);
    t
}

fn vars() -> VariableSet {
    VariableSet::default()
}

fn ch(text: &str) -> Character {
    Character::parse(text, &vars()).unwrap()
}

fn positive() -> Chamber {
    Chamber::new(vec![int(1)]).unwrap()
}

#[test]
fn identity_maps_to_identity() {
    let t = RestrictionMatrix::identity(vars(), vec!["x".into(), "y".into(), "u".into()]);
    assert!(validate_section(&t).passed());
    for w in [int(0), q(1, 2), q(-5, 3), int(2)] {
        for d in [KahlerDirection::ToZero, KahlerDirection::ToInfinity] {
            let out = apply_limit_theorem(&t, &[w], &chamber(d)).unwrap();
            assert!(out.candidate.is_identity());
            assert!(out.h.is_none());
            assert!(check_stab_axioms(&out.candidate, &t, &[w]).passed());
        }
    }
}

#[test]
fn validation_of_the_bundle_fixture() {
    let t = two_by_two(bundle_entry());
    let r = validate_section(&t);
    assert!(r.passed(), "{r:?}");
    assert_eq!(t.entries[&(0, 1)].quasiperiod_index().unwrap().get(0, 0), 1);
}

#[test]
fn mixed_denominator_is_flagged() {
    let e = single(vec![th(&[(A, 1)]), th(&[(Z, 1)])], vec![th(&[(A, 1), (Z, 1)])]);
    let r = validate_section(&two_by_two(e));
    let failed: Vec<&str> = r.failures().map(|c| c.check.as_str()).collect();
    assert_eq!(failed, vec!["separatedPoles"]);
}

#[test]
fn support_violations_are_flagged() {
    let mut t = two_by_two(bundle_entry());
    t.meta.order = vec![1, 0];
    assert!(!validate_section(&t).passed());
    let out = apply_limit_theorem(&t, &[Q::zero()], &chamber(KahlerDirection::ToZero)).unwrap();
    assert!(!check_stab_axioms(&out.candidate, &t, &[Q::zero()]).passed());
}

#[test]
fn bundle_fixture_limits() {
    let t = two_by_two(bundle_entry());
    let zero = apply_limit_theorem(&t, &[Q::zero()], &chamber(KahlerDirection::ToZero)).unwrap();
    let want = RationalExpr::from_factors(vec![om(&[(H, 1)])], vec![om(&[(A, 1)])]).unwrap();
    assert!(zero.candidate.get(0, 1).equals(&want));

    let inf = apply_limit_theorem(&t, &[Q::zero()], &chamber(KahlerDirection::ToInfinity)).unwrap();
    let want = RationalExpr::from_factors(vec![om(&[(H, 1)]), Character::monomial(mono(&[(A, 1), (H, -1)]))], vec![
        om(&[(A, 1)]),
    ])
    .unwrap();
    assert!(inf.candidate.get(0, 1).equals(&want));

    // At w = 1/2 the corrected entry vanishes at both ends.
    for d in [KahlerDirection::ToZero, KahlerDirection::ToInfinity] {
        let out = apply_limit_theorem(&t, &[q(1, 2)], &chamber(d)).unwrap();
        assert!(out.candidate.is_identity());
    }
}

#[test]
fn kahler_shift_fixture() {
    // theta(z a) / theta(a) -> z^{-1/2} (1 - a z) / (1 - a) at w = 0.
    let mut t = two_by_two(single(vec![th(&[(Z, 1), (A, 1)])], vec![th(&[(A, 1)])]));
    t.meta.kahler_shift.insert(0, vec![q(1, 2)]);
    let out = apply_limit_theorem(&t, &[Q::zero()], &chamber(KahlerDirection::ToZero)).unwrap();
    let want = RationalExpr::from_factors(vec![], vec![om(&[(A, 1)])]).unwrap();
    assert!(out.candidate.get(0, 1).equals(&want));

    let err = apply_limit_theorem(&t, &[Q::zero()], &chamber(KahlerDirection::ToInfinity)).unwrap_err();
    assert!(matches!(&err, Error::DivergentLimit(m) if m.starts_with("entry (p, q)")));

    t.meta.kahler_shift.insert(0, vec![q(-1, 2)]);
    let out = apply_limit_theorem(&t, &[Q::zero()], &chamber(KahlerDirection::ToInfinity)).unwrap();
    let want = RationalExpr::from_factors(vec![Character::term(mono(&[(A, 1)]), -1)], vec![om(&[(A, 1)])]).unwrap();
    assert!(out.candidate.get(0, 1).equals(&want));
}

#[test]
fn conjugation_by_kahler_monomials_is_absorbed() {
    let base = two_by_two(bundle_entry());
    let k = [3, -1];
    let mut conj = base.clone();
    for (&(r, c), e) in conj.entries.iter_mut() {
        for t in &mut e.terms {
            t.prefactor = &t.prefactor * &mono(&[(Z, k[r] - k[c])]);
        }
    }
    for (l, kl) in k.iter().enumerate() {
        conj.meta.kahler_shift.insert(l, vec![int(-kl)]);
    }
    for w in [Q::zero(), q(1, 3)] {
        for d in [KahlerDirection::ToZero, KahlerDirection::ToInfinity] {
            let a = apply_limit_theorem(&base, &[w], &chamber(d)).unwrap().candidate;
            let b = apply_limit_theorem(&conj, &[w], &chamber(d)).unwrap().candidate;
            assert!(a.get(0, 1).equals(&b.get(0, 1)));
        }
    }
}

fn hilbert_two() -> RestrictionMatrix {
    // d_(2) - d_(1,1) = -2 under i - j.
    let e = single(vec![th(&[(Z, 1), (A, -2)]), th(&[(H, 1)])], vec![th(&[(A, -2)]), th(&[(Z, 1), (H, 1)])]);
    let mut t = two_by_two(e);
    t.labels = vec!["(2)".into(), "(1,1)".into()];
    t.meta.hilbert = true;
    t
}

#[test]
fn hilbert_labels() {
    let t = hilbert_two();
    assert!(validate_section(&t).passed());
    let out = apply_limit_theorem(&t, &[q(1, 2)], &chamber(KahlerDirection::ToZero)).unwrap();
    let h = out.h.unwrap();
    let conv = ConventionSet::default();
    let m: Vec<Q> = ["(2)", "(1,1)"]
        .iter()
        .map(|l| hilbcomb::m_hilbert(&l.parse().unwrap(), q(1, 2), &conv))
        .collect();
    assert_eq!(h.exponents_full, m);
    assert_eq!(h.exponents_half, vec![m[0] / int(2), m[1] / int(2)]);
    assert_eq!(h.z_exponents, vec![q(-1, 2), q(1, 2)]);

    // (2) and (1,1) are in different components for b = 3.
    assert!(matches!(
        apply_limit_theorem(&t, &[q(1, 3)], &chamber(KahlerDirection::ToZero)),
        Err(Error::ComponentMismatch(_))
    ));

    let mut bad = t.clone();
    bad.entries.insert((0, 1), bundle_entry());
    assert_eq!(validate_section(&bad).failures().next().unwrap().check, "hilbertPairing");
}

fn fixture_p() -> Character {
    ch("a + a^2")
}

fn fixture_n() -> Character {
    ch("hbar * a^-1 + hbar * a^-2")
}

fn fixture_value() -> RationalExpr {
    RationalExpr::from_factors(
        vec![Character::monomial(mono(&[(H, 2)])), om(&[(A, 2), (H, -1)])],
        vec![om(&[(A, 2)])],
    )
    .unwrap()
}

#[test]
fn polarization_limit_fixture() {
    let got = lemma3_limit(&fixture_p(), &fixture_n(), &[q(1, 2)]).unwrap();
    assert!(got.equals(&fixture_value()), "{}", got.display(&vars()));
    let closed = lemma3_closed_form(&fixture_p(), &positive(), &[q(1, 2)]).unwrap();
    assert!(closed.equals(&fixture_value()));
}

#[test]
fn polarization_limit_trivial_cases() {
    let at_zero = lemma3_limit(&fixture_p(), &fixture_n(), &[Q::zero()]).unwrap();
    let s_ratio = fixture_n().s_hat().unwrap().checked_div(&fixture_p().s_hat().unwrap()).unwrap();
    assert!(at_zero.equals(&s_ratio));
    let p = ch("a^3 + hbar * a^-1");
    assert!(lemma3_limit(&p, &p, &[q(2, 5)]).unwrap().equals(&RationalExpr::one()));
}

#[test]
fn polarization_limit_numeric_convergence() {
    let sqrt_of = |v: Var| match v {
        Var::Hbar => Complex64::new(1.3, 0.4),
        _ => Complex64::new(0.8, -0.3),
    };
    let exact = fixture_value().eval_sqrt(&sqrt_of);
    let errs: Vec<f64> = [1e-3, 1e-4, 1e-5]
        .iter()
        .map(|&qv| {
            let v = lemma3_numeric(&fixture_p(), &fixture_n(), &[q(1, 2)], &sqrt_of, qv, 1e-15).unwrap();
            (v - exact).norm() / exact.norm()
        })
        .collect();
    for pair in errs.windows(2) {
        let rate = pair[0] / pair[1];
        assert!((2.0..5.0).contains(&rate), "errors {errs:?}");
    }
    assert!(errs[2] < 1e-2);
}

#[test]
fn closed_form_matches_exact_limit_on_hilbert_fixed_points() {
    let grid = SlopeGrid::new(&[1, 2, 3, 4], true);
    let slopes: Vec<Q> = grid.slopes.into_iter().filter(|w| *w <= int(2) && *w >= int(-2)).collect();
    for conv in ConventionSet::all() {
        for n in 1..=4 {
            for lambda in partitions(n) {
                let p = hilbcomb::polarization(&lambda, &conv);
                let nm = hilbcomb::n_minus(&lambda, &conv);
                for &w in &slopes {
                    let exact = lemma3_limit(&p, &nm, &[w]).unwrap();
                    let closed = lemma3_closed_form(&p, &conv.chamber(), &[w]).unwrap();
                    assert!(exact.equals(&closed), "{lambda} w = {w}");
                }
            }
        }
    }
}

#[test]
fn normalization_check() {
    let mut t = hilbert_two();
    let w = [q(1, 2)];
    let out = apply_limit_theorem(&t, &w, &chamber(KahlerDirection::ToZero)).unwrap();
    let r = check_stab_axioms(&out.candidate, &t, &w);
    assert!(r.passed());
    assert_eq!(r.count(CheckStatus::Skipped), 2 + out.candidate.entries.len());

    // Synthetic data: the exact limit of the diagonal restriction.
    let conv = ConventionSet::default();
    for (i, l) in t.labels.clone().iter().enumerate() {
        let lambda = l.parse().unwrap();
        let d = lemma3_limit(&hilbcomb::polarization(&lambda, &conv), &hilbcomb::n_minus(&lambda, &conv), &w).unwrap();
        t.meta.diagonal.insert(i, d);
    }
    assert!(check_stab_axioms(&out.candidate, &t, &w).passed());

    let wrong = t.meta.diagonal[&0].mul_monomial(&mono(&[(H, 1)]));
    t.meta.diagonal.insert(0, wrong);
    let r = check_stab_axioms(&out.candidate, &t, &w);
    let f = r.failures().next().unwrap();
    assert_eq!(f.check, "normalization");
    assert!(f.detail.contains("supplied") && f.detail.contains("expected"));
}

#[test]
fn normalization_with_explicit_polarization() {
    let mut t = RestrictionMatrix::identity(vars(), vec!["o".into()]);
    t.meta.polarization.insert(0, fixture_p());
    t.meta.diagonal.insert(0, fixture_value());
    let k = apply_limit_theorem(&t, &[q(1, 2)], &chamber(KahlerDirection::ToZero)).unwrap().candidate;
    assert_eq!(check_stab_axioms(&k, &t, &[q(1, 2)]).count(CheckStatus::Skipped), 1);
    t.meta.chamber = Some(positive());
    let r = check_stab_axioms(&k, &t, &[q(1, 2)]);
    assert!(r.passed() && r.count(CheckStatus::Skipped) == 0, "{r:?}");
}

#[test]
fn degree_window() {
    let e = RationalExpr::from_factors(vec![], vec![om(&[(A, 1)])]).unwrap();
    assert_eq!(degree_span(&e, A), Some((int(-1), int(0))));
    let k = KMatrixCandidate { labels: vec!["p".into(), "q".into()], entries: [((0, 1), e)].into_iter().collect() };
    let mut t = two_by_two(bundle_entry());
    let window = |r: &Report| r.checks.iter().find(|c| c.check == "degreeWindow").unwrap().status;
    assert_eq!(window(&check_stab_axioms(&k, &t, &[Q::zero()])), CheckStatus::Skipped);

    t.meta.slopes.insert(0, q(1, 3));
    t.meta.slopes.insert(1, q(1, 3));
    t.meta.windows.insert(0, (int(-1), int(0)));
    assert_eq!(window(&check_stab_axioms(&k, &t, &[Q::zero()])), CheckStatus::Pass);
    t.meta.slopes.insert(1, q(-2, 3));
    assert_eq!(window(&check_stab_axioms(&k, &t, &[Q::zero()])), CheckStatus::Fail);
}

#[test]
fn json_ingestion() {
    let doc = r#"{
        "labels": ["(2)", "(1,1)"],
        "entries": [{"row": "(2)", "col": "(1,1)", "value": {"terms": [{
            "num": [{"exp": {"a": -2, "z": 1}}, {"exp": {"hbar": 1}}],
            "den": [{"exp": {"a": -2}}, {"exp": {"hbar": 1, "z": 1}}]}]}}],
        "metadata": {"hilbert": true, "content": "i-j", "attract": "neg",
                     "diagonal": {"(2)": {"num": ["1"]}}, "slopes": {"(2)": "1/2"}}
    }"#;
    let t = RestrictionMatrix::from_json_str(doc).unwrap();
    assert_eq!(t.entries.len(), 1);
    assert!(t.meta.hilbert);
    assert_eq!(t.meta.slopes[&0], q(1, 2));
    assert!(validate_section(&t).passed());
    let out = apply_limit_theorem(&t, &[q(1, 2)], &chamber(KahlerDirection::ToZero)).unwrap();
    let json = serde_json::to_value(out.candidate.to_json(&t.vars)).unwrap();
    assert_eq!(json["labels"][1], "(1,1)");

    assert!(RestrictionMatrix::from_json_str(r#"{"labels": ["x", "x"]}"#).is_err());
    assert!(RestrictionMatrix::from_json_str(r#"{"labels": ["x"], "bogus": 1}"#).is_err());
    let unknown = r#"{"labels": ["x"], "entries": [{"row": "x", "col": "y", "value": {"terms": []}}]}"#;
    assert!(RestrictionMatrix::from_json_str(unknown).is_err());
}

#[test]
fn rational_expression_json_round_trip() {
    let e = fixture_value();
    let j = RationalExprJson::from_expr(&e, &vars());
    assert!(j.to_expr(&vars()).unwrap().equals(&e));
}

