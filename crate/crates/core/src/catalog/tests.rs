use super::*;
use crate::classifier::{h_verdict, h_verdict_sum, Assertions};
use crate::conditions::{beta2, CheckParams, Registry, Settings};
use crate::exponent::{ExponentHandle, Strategy};
use crate::report::VerdictReport;

fn matches(got: &VerdictReport, want: &GoldenReport) -> bool {
    got.verdict == want.verdict
        && got.case.as_ref().map(|c| c.case) == want.case
        && got.hitting_set == want.hitting_set
        && got.rule_ids() == want.chain
}

#[test]
fn listing() {
    let names = catalog_list();
    assert!(names.len() >= 12);
    for n in [
        "brownian",
        "drifted-brownian",
        "symmetric-stable-0.5",
        "symmetric-stable-1.0",
        "symmetric-stable-1.5",
        "asymmetric-cauchy",
        "spectrally-positive-stable-1.5",
        "stable-subordinator-0.5",
        "compound-poisson",
        "c2-failure",
        "example-2.9",
        "type-alpha-beta-pair",
    ] {
        assert!(names.iter().any(|x| x == n), "{n}");
    }
    assert_eq!(catalog_get("c2-failure").unwrap().expected.classify.verdict, Status::Fails);
    assert_eq!(catalog_get("compound-poisson").unwrap().expected.beta2, Some(0.0));
    assert_eq!(catalog_get("nope").unwrap_err(), HuntError::UnknownName("nope".into()));
}

#[test]
fn golden_classification() {
    let s = Settings::default();
    for name in catalog_list() {
        let e = catalog_get(&name).unwrap();
        let h = ExponentHandle::new(e.triplet.clone());
        let got = VerdictReport::from_h(&h_verdict(&h, &s), &s);
        assert!(matches(&got, &e.expected.classify), "{name}: {:?} vs {:?}", got.rule_ids(), e.expected.classify);
        if let (Some(p), Some(want)) = (&e.partner, &e.expected.sum_asserted) {
            let a = Assertions { h_holds: true, ..Default::default() };
            let r = h_verdict_sum(&h, &ExponentHandle::new(p.clone()), &a, &s).unwrap();
            let got = VerdictReport::from_h(&r, &s);
            assert!(matches(&got, want), "{name} sum: {:?}", got.rule_ids());
        }
    }
}

#[test]
fn golden_checks() {
    let s = Settings::default();
    let reg = Registry::standard();
    for name in catalog_list() {
        let e = catalog_get(&name).unwrap();
        let h = ExponentHandle::new(e.triplet.clone());
        for (id, want) in &e.expected.checks {
            let v = reg.check(id, &h, &CheckParams::default(), &s).unwrap();
            assert_eq!(v.status, *want, "{name} {id}: {:?}", v.evidence);
        }
        if let Some(b) = e.expected.beta2 {
            assert!((beta2(&e.triplet.mu) - b).abs() < 1e-12, "{name}");
        }
    }
}

#[test]
fn closed_forms_match_quadrature() {
    let zs: Vec<f64> = (0..=30).map(|k| 10f64.powf(-1.0 + k as f64 / 10.0)).collect();
    for name in catalog_list() {
        let e = catalog_get(&name).unwrap();
        let Some(cf) = &e.closed_form_psi else { continue };
        if e.triplet.dim != 1 {
            continue;
        }
        let h = ExponentHandle::with_strategy(e.triplet.clone(), Strategy::QuadratureOnly);
        for &z in &zs {
            let (want, got) = (cf(z), h.psi1(z).unwrap());
            assert!((want - got).norm() <= 1e-6 * want.norm(), "{name} z={z}: {want} vs {got}");
        }
    }
}

#[test]
fn pinned_constants_match_gamma_formula() {
    use crate::special::gamma;
    for (name, alpha) in [("symmetric-stable-0.5", 0.5), ("symmetric-stable-1.5", 1.5)] {
        let c: f64 = 2.0 * gamma(1.0 - alpha) * (std::f64::consts::FRAC_PI_2 * alpha).cos() / alpha;
        assert!((psi_constant(name).unwrap() - c).abs() < 1e-12 * c);
    }
    assert_eq!(psi_constant("symmetric-stable-1.0"), Some(std::f64::consts::PI));
}
