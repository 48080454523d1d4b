mod common;

use common::*;
use hyperint::congruence::{
    criterion_full, factorial_ratio_sequence, formal_congruence_check, g_weight, hypergeometric_exceptions,
    landau_cross_check, psi_by_threshold, psi_set, s_sum, twisted_expansion_verify, AlgebraCase, CongruenceGrid,
    CriterionVerdict, MemoSequence, ResidueFrame,
};
use hyperint::constants::{c_prime, FactorialRatio};
use hyperint::exact::int;
use hyperint::series::pochhammer_ratio;
use hyperint::{ParamPair, Rational};
use proptest::prelude::*;

fn twisted_sequence<'a>(
    pr: &'a ParamPair,
    frame: &'a ResidueFrame,
    t: u64,
) -> MemoSequence<impl Fn(u32, u64) -> Rational + Sync + Send + 'a> {
    let scale = c_prime(pr).unwrap();
    MemoSequence::new(move |r, n| pochhammer_ratio(&pr.scaled_reduced(frame.twist(t, r)), n) * scale.pow(n as i32))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    /// Summing the windows over all m telescopes to zero.
    #[test]
    fn window_sums_cancel(a_raw in 0u64..7, k in 0i64..25, s in 0u32..3, p in prop::sample::select(vec![2u64, 3, 5]), which in 0usize..3) {
        let ratios = [(vec![5], vec![1; 5]), (vec![4, 2], vec![1; 6]), (vec![2, 2], vec![1, 1, 1, 1])];
        let (e, f) = ratios[which].clone();
        let seq = factorial_ratio_sequence(FactorialRatio::new(e, f).unwrap());
        let a = a_raw % p;
        let top = k as u64 / p.pow(s) + 1;
        let total: Rational = (0..=top).map(|m| s_sum(&seq, a, k, s, p, m, 0)).sum();
        prop_assert_eq!(total, int(0));
    }
}

#[test]
fn psi_threshold_form_on_more_frames() {
    for (a, b, p) in [("1/7,1/4,3/7,6/7", "1,1,1,1", 7u64), ("1/4,1/2,3/4,1/2", "1,1,1,1", 3), ("1/6,1/2,2/3", "1/3,1,1", 5)] {
        let pr = pair(a, b);
        let frame = ResidueFrame::for_pair(&pr, p, 1).unwrap();
        let ns = hypergeometric_exceptions(&pr, &frame, 5, 2);
        for r in -1..=2i64 {
            for s in 0..=2u32 {
                assert_eq!(psi_set(&ns, r, s).unwrap(), psi_by_threshold(&pr, &frame, r, s), "{a} p={p} r={r} s={s}");
            }
        }
    }
}

/// With integral β and p | d the coefficients gain the factor `p^e`,
/// `e = −1 − ⌊λ_p/(p−1)⌋`; for e = (4,2) at p = 2 that is `2³`.
#[test]
fn scaled_case_certifies_the_extra_divisibility() {
    let pr = FactorialRatio::new(vec![4, 2], vec![1; 6]).unwrap().pair();
    let rep = twisted_expansion_verify(&pr, 2, 1, None, 30, 1).unwrap();
    assert_eq!(rep.case, AlgebraCase::Scaled);
    assert_eq!(rep.required_valuation, 3);
    assert_eq!(rep.frame.omega_b, vec![1, 3]);
    assert!(rep.holds, "{:?}", rep.witness);
    assert!(rep.min_valuation.at_least(3));
    assert!(rep.depths[0].strict_holds);
}

#[test]
fn frame_of_size_six() {
    let pr = pair("1/7,1/4,3/7,6/7", "1,1,1,1");
    for b in [1, 3] {
        let rep = twisted_expansion_verify(&pr, 7, b, None, 15, 1).unwrap();
        assert_eq!(rep.frame.omega_b.len(), 6);
        assert!(rep.exhaustive && rep.holds, "{:?}", rep.witness);
    }
}

#[test]
fn sampled_frames_are_validated() {
    let pr = pair("1/7,1/4,3/7,6/7", "1,1,1,1");
    assert!(twisted_expansion_verify(&pr, 7, 1, Some(&[2]), 5, 1).is_err());
    let rep = twisted_expansion_verify(&pr, 7, 1, Some(&[1, 5]), 5, 1).unwrap();
    assert!(!rep.exhaustive);
}

/// The hypergeometric instantiation: `A_r(n) = C'^n·(⟨t^{(r)}α⟩)_n/(⟨t^{(r)}β⟩)_n`
/// with `g_r(m) = p^{μ_r(m)}`.
#[test]
fn threshold_weights_satisfy_the_formal_congruences() {
    for (a, b, p) in [("1/5,2/5,3/5,4/5", "1,1,1,1", 2u64), ("1/5,2/5,3/5,4/5", "1,1,1,1", 3), ("1/7,1/4,3/7,6/7", "1,1,1,1", 2), ("1/7,1/4,3/7,6/7", "1,1,1,1", 3)] {
        let pr = pair(a, b);
        let frame = ResidueFrame::for_pair(&pr, p, 1).unwrap();
        let seq = twisted_sequence(&pr, &frame, frame.omega_b[0]);
        let grid = CongruenceGrid { p, k_max: 12, s_max: 1, m_max: 3, r_max: 1 };
        let report = formal_congruence_check(&seq, &|r, m| g_weight(&pr, &frame, r, m), &grid).unwrap();
        assert!(report.holds, "{a} p={p}: {:?}", report.failures.first());
    }
}

#[test]
fn landau_agrees_in_both_directions() {
    for (e, f, expected) in [
        (vec![5], vec![1; 5], true),
        (vec![4, 2], vec![1; 6], true),
        (vec![3], vec![1, 2], false),
        (vec![2], vec![1], false),
    ] {
        let cmp = landau_cross_check(&FactorialRatio::new(e.clone(), f.clone()).unwrap(), 12).unwrap();
        assert!(cmp.agree, "{e:?}/{f:?}: {cmp:?}");
        assert_eq!(cmp.landau, expected);
    }
}

#[test]
fn criterion_report_is_exact_json() {
    // H holds but q ≠ q_{⟨aα⟩,⟨aβ⟩} for a ≠ 1: exp(S/𝔫) is integral, q is not.
    let rep = criterion_full(&pair("1/7,1/4,3/7,6/7", "1,1,1,1"), 10).unwrap();
    assert!(rep.verdicts.h_holds);
    assert_eq!(rep.verdicts.criterion, CriterionVerdict::Fails);
    assert_eq!(rep.verdicts.q_identity_failures.len(), 11);
    assert_eq!(rep.verdicts.q_integral.as_ref().unwrap().first_bad_index, Some(3));
    assert!(rep.verdicts.exp_s_root_integral.as_ref().unwrap().integral);
    assert_eq!(rep.constants.as_ref().unwrap().frak_n, Some(2));
    let text = serde_json::to_string(&rep).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    fn no_floats(v: &serde_json::Value) -> bool {
        match v {
            serde_json::Value::Number(n) => !n.is_f64(),
            serde_json::Value::Array(xs) => xs.iter().all(no_floats),
            serde_json::Value::Object(m) => m.values().all(no_floats),
            _ => true,
        }
    }
    assert!(no_floats(&value));
    assert_eq!(value["constants"]["c_prime"], "19208");
}

#[test]
fn h_failure_makes_the_criterion_fail() {
    let rep = criterion_full(&pair("1/6,1/2,2/3", "1/3,1,1"), 30).unwrap();
    assert!(rep.verdicts.n_integral);
    assert!(!rep.verdicts.h_holds);
    assert_eq!(rep.verdicts.criterion, CriterionVerdict::Fails);
    assert_eq!(rep.verdicts.q_integral.as_ref().map(|v| v.integral), Some(false));
}
