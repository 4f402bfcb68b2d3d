use std::sync::Arc;

use super::*;
use crate::model::{Atom, LevyComponent, LevyMeasure, LevyTriplet, PowerTerm, TypeAlphaBetaDensity};

fn stable(alpha: f64, cp: f64, cm: f64) -> LevyMeasure {
    LevyMeasure::new(vec![LevyComponent::StablePower { alpha, c_plus: cp, c_minus: cm, cutoff: f64::INFINITY }])
}

fn handle(a: f64, q: f64, mu: LevyMeasure) -> ExponentHandle {
    ExponentHandle::new(LevyTriplet::scalar(a, q, mu).unwrap())
}

/// Pure-jump subordinator with density x^{-1-index} on (0, 1]; the drift
/// cancels the compensator so that a' = 0.
fn subordinator(index: f64, alpha: f64, beta: f64) -> ExponentHandle {
    let d = TypeAlphaBetaDensity { terms: vec![PowerTerm { scale: 1.0, index }], alpha, beta, c: 2.0 };
    handle(-1.0 / (1.0 - index), 0.0, LevyMeasure::new(vec![LevyComponent::TypeAlphaBeta(d)]))
}

fn cp() -> LevyMeasure {
    LevyMeasure::new(vec![LevyComponent::Atoms(vec![Atom::scalar(1.0, 1.5), Atom::scalar(-2.0, 0.5)])])
}

fn s() -> Settings {
    Settings::default()
}

#[test]
fn subordinator_exponent_has_no_drift() {
    // Re and Im of int_0^1 (1 - e^{izx}) x^{-1.75} dx at small z are O(z^0.75) and O(z)
    let h = subordinator(0.75, 0.7, 0.8);
    let p = h.psi1(1e-8).unwrap();
    assert!(p.im.abs() < 1e-7 && p.re >= 0.0);
    assert!(h.triplet().adjusted_drift().unwrap()[0].abs() < 1e-12);
}

#[test]
fn im_domination_examples() {
    let v = check_im_domination(&handle(1.0, 0.0, LevyMeasure::zero()), &handle(0.0, 0.0, stable(1.5, 1.0, 1.0)), &s());
    assert_eq!(v.status, Status::Holds);
    assert!(v.number("c_est").unwrap() < 1e-12);
    let v = check_im_domination(&handle(0.0, 1.0, LevyMeasure::zero()), &handle(1.0, 0.0, LevyMeasure::zero()), &s());
    assert_eq!(v.status, Status::Holds);
    assert!((v.number("c_est").unwrap() - 0.5f64.sqrt()).abs() < 1e-4);
    let v = check_im_domination(&handle(0.0, 0.0, LevyMeasure::zero()), &handle(1.0, 0.0, LevyMeasure::zero()), &s());
    assert_eq!(v.status, Status::Fails);
}

#[test]
fn gamma_examples() {
    assert!((lemma314_gamma(1.0) - 0.1).abs() < 1e-15);
    assert!((lemma314_gamma(1e-9) - 0.125).abs() < 1e-15);
    assert!((lemma314_gamma(10.0) - 0.5 / 401.0).abs() < 1e-15);
    for c in [0.01, 0.1, 1.0, 10.0, 100.0] {
        let g = lemma314_gamma(c);
        assert!(g > 0.0 && g < 0.25 && (1.0 - g) * (1.0 + 1.0 / (4.0 * c * c)) > 1.0);
    }
}

#[test]
fn lemma314_sampling() {
    assert_eq!(verify_lemma314(1.0, 0.1, 100_000, 7).status, Status::Holds);
    let bad = verify_lemma314(1.0, 0.5, 100_000, 7);
    assert_eq!(bad.status, Status::Fails);
    let ce: [[f64; 2]; 2] = serde_json::from_value(bad.evidence["counterexample"].clone()).unwrap();
    let (a, b) = (Complex64::new(ce[0][0], ce[0][1]), Complex64::new(ce[1][0], ce[1][1]));
    assert!((1.0 + a + b).norm_sqr() < 0.5 * (1.0 + a).norm_sqr());
    assert!(b.im.abs() <= 1.0 + a.re + b.re);
    // psi2 = 0 is forced by c = 0
    assert_eq!(verify_lemma314(0.0, 0.9, 10_000, 1).status, Status::Holds);
}

#[test]
fn pro312_examples() {
    let v = check_pro312(&handle(0.0, 0.0, stable(0.3, 1.0, 0.0)), &handle(0.0, 0.0, cp()), Pro312Variant::I, &s());
    assert_eq!(v.status, Status::Holds);
    let x1 = subordinator(0.75, 0.7, 0.8);
    let x2 = subordinator(0.25, 0.2, 0.3);
    for variant in [Pro312Variant::I, Pro312Variant::Ii, Pro312Variant::Iii] {
        assert_eq!(check_pro312(&x1, &x2, variant, &s()).status, Status::Holds, "{variant:?}");
    }
    let v = check_pro312(&handle(0.0, 0.0, LevyMeasure::zero()), &handle(0.0, 0.0, stable(1.5, 1.0, 1.0)), Pro312Variant::I, &s());
    assert_eq!(v.status, Status::Fails);
}

#[test]
fn pro312_pointwise_consequence() {
    let x1 = subordinator(0.75, 0.7, 0.8);
    let x2 = subordinator(0.25, 0.2, 0.3);
    let c = check_pro312(&x1, &x2, Pro312Variant::Iii, &s()).number("c").unwrap();
    let (bad, margin) = pro312_consequence(&x1, &x2, c, &s()).unwrap();
    assert_eq!(bad, 0);
    assert!(margin >= 1.0);
}

#[test]
fn pro43_examples() {
    let sym1 = Arc::new(handle(0.0, 0.0, stable(1.5, 1.0, 1.0)));
    let sym2 = handle(0.0, 1.0, LevyMeasure::zero());
    let w = SplitWitness::trivial(sym1.clone());
    assert_eq!(check_pro43(&sym1, &sym2, &w, GrowthFunctionFamily::Constant(1.0), &s()).unwrap().status, Status::Holds);

    let bm_drift = Arc::new(handle(1.0, 1.0, LevyMeasure::zero()));
    let drift = handle(1.0, 0.0, LevyMeasure::zero());
    let w = SplitWitness::trivial(bm_drift.clone());
    let v = check_pro43(&bm_drift, &drift, &w, GrowthFunctionFamily::Constant(1.0), &s()).unwrap();
    assert_eq!(v.status, Status::Holds);

    let split = SplitWitness { phi11: Box::new(|z| 0.5 * z), phi12: Box::new(|z| 0.5 * z) };
    let v = check_pro43(&bm_drift, &drift, &split, GrowthFunctionFamily::Constant(1.0), &s()).unwrap();
    // int |z/2| / |1 + z^2/2 + iz|^2 dz converges
    assert_eq!(v.status, Status::Holds);

    let wrong = SplitWitness { phi11: Box::new(|_| 0.0), phi12: Box::new(|_| 0.0) };
    assert!(matches!(
        check_pro43(&bm_drift, &drift, &wrong, GrowthFunctionFamily::Constant(1.0), &s()),
        Err(HuntError::InvalidWitness(_))
    ));
}

#[test]
fn bg_rule_examples() {
    let a = handle(0.0, 0.0, stable(1.5, 1.0, 1.0));
    let b = handle(0.0, 0.0, stable(0.5, 1.0, 1.0));
    assert_eq!(check_bg_rule(&a, &b, &s()).status, Status::Holds);
    assert_eq!(check_bg_rule(&b, &a, &s()).status, Status::Fails);
    assert_eq!(check_bg_rule(&handle(0.0, 1.0, LevyMeasure::zero()), &handle(0.0, 0.0, cp()), &s()).status, Status::Holds);
}

#[test]
fn effective_index_counts_drift_and_gaussian_part() {
    assert_eq!(effective_beta2(&handle(0.0, 1.0, LevyMeasure::zero())), 2.0);
    assert_eq!(effective_beta2(&handle(1.0, 0.0, stable(0.5, 1.0, 1.0))), 1.0);
    assert_eq!(effective_beta2(&handle(0.0, 0.0, stable(0.5, 1.0, 1.0))), 0.5);
}
