use hunt_core::catalog::{catalog_get, catalog_list, CatalogEntry};
use hunt_core::classifier::{h_verdict, Source};
use hunt_core::conditions::{
    bg_indices, check_bg, check_cba, check_kf, check_loglog_local, check_nd, check_nu_alpha, check_rao, check_sym, check_thm26,
    CheckParams, GrowthFunctionFamily, Registry, Settings, Status,
};
use hunt_core::exponent::ExponentHandle;
use hunt_core::model::{LevyComponent, LevyMeasure, LevyTriplet};
use hunt_core::pairs::{check_bg_rule, check_pro312, Pro312Variant};

fn entries() -> Vec<CatalogEntry> {
    catalog_list().iter().map(|n| catalog_get(n).unwrap()).collect()
}

fn implies(a: Status, b: Status) -> bool {
    a != Status::Holds || b == Status::Holds
}

#[test]
fn checker_implications_hold_on_catalog() {
    let s = Settings::default();
    let mut violations = Vec::new();
    for e in entries() {
        let h = ExponentHandle::new(e.triplet.clone());
        let nd = check_nd(&e.triplet).status;
        let sym = check_sym(&h, &s).status;
        let kf = check_kf(&h, &s).status;
        let rc = check_rao(&h, Some(GrowthFunctionFamily::Constant(1.0)), &s).status;
        let rl = check_rao(&h, Some(GrowthFunctionFamily::Log(1.0)), &s).status;
        let cba = check_cba(&h, &s).status;
        let pairs = [("nd=>kf", nd, kf), ("sym=>kf", sym, kf), ("kf=>rao(const)", kf, rc), ("rao(const)=>rao(log)", rc, rl), ("kf=>cba", kf, cba)];
        for (what, a, b) in pairs {
            if !implies(a, b) {
                violations.push(format!("{}: {what}", e.name));
            }
        }
        if e.triplet.dim == 1 {
            let t26 = check_thm26(&e.triplet, &s).status;
            if !implies(t26, check_loglog_local(&e.triplet, &s).status) {
                violations.push(format!("{}: thm26=>loglog", e.name));
            }
            if !implies(t26, check_nu_alpha(&e.triplet, 0.5).status) {
                violations.push(format!("{}: thm26=>nu-alpha", e.name));
            }
        }
    }
    assert!(violations.is_empty(), "{violations:?}");
}

#[test]
fn chain_entries_replay_as_holds() {
    let s = Settings::default();
    let reg = Registry::standard();
    for e in entries() {
        let h = ExponentHandle::new(e.triplet.clone());
        let r = h_verdict(&h, &s);
        for c in r.chain.iter().filter(|c| c.source == Source::Computed) {
            let id = if c.rule == "density-gate" { "hw" } else { c.rule.as_str() };
            if let Ok(cond) = reg.get(id) {
                assert_eq!(cond.check(&h, &CheckParams::default(), &s).unwrap().status, Status::Holds, "{} {}", e.name, c.rule);
            }
        }
    }
}

fn stable(alpha: f64, cp: f64, cm: f64) -> ExponentHandle {
    let mu = LevyMeasure::new(vec![LevyComponent::StablePower { alpha, c_plus: cp, c_minus: cm, cutoff: f64::INFINITY }]);
    ExponentHandle::new(LevyTriplet::scalar(0.0, 0.0, mu).unwrap())
}

#[test]
fn pro312_variants_are_nested() {
    let s = Settings::default();
    let mut pairs: Vec<(ExponentHandle, ExponentHandle)> = entries()
        .into_iter()
        .filter_map(|e| e.partner.map(|p| (ExponentHandle::new(e.triplet), ExponentHandle::new(p))))
        .collect();
    pairs.push((stable(1.5, 1.0, 1.0), stable(0.5, 1.0, 0.0)));
    pairs.push((stable(0.5, 1.0, 1.0), stable(1.5, 1.0, 1.0)));
    pairs.push((stable(1.0, 1.0, 1.0), stable(1.0, 1.0, 0.0)));
    pairs.push((ExponentHandle::new(catalog_get("brownian").unwrap().triplet), stable(1.2, 1.0, 0.3)));
    for (h1, h2) in &pairs {
        let v: Vec<Status> =
            [Pro312Variant::I, Pro312Variant::Ii, Pro312Variant::Iii].iter().map(|&x| check_pro312(h1, h2, x, &s).status).collect();
        assert!(implies(v[0], v[1]) && implies(v[1], v[2]), "{:?}: {v:?}", h2.triplet());
    }
}

#[test]
fn blumenthal_getoor_estimates() {
    let s = Settings::default();
    for alpha in [0.5, 1.0, 1.5] {
        let h = stable(alpha, 1.0, 1.0);
        let b = bg_indices(&h, &s).unwrap();
        assert!((b.beta1pp.unwrap() - alpha).abs() < 0.05, "{alpha}: {:?}", b.beta1pp);
        assert!((b.beta2 - alpha).abs() < 0.05);
        assert_eq!(check_bg(&h, &s).status, Status::Holds);
    }
    let (x, y) = (stable(1.5, 1.0, 1.0), stable(0.5, 1.0, 1.0));
    assert_eq!(check_bg_rule(&x, &y, &s).status, Status::Holds);
    assert_eq!(check_bg_rule(&y, &x, &s).status, Status::Fails);
}

