use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::cases::{bretagnolle_case, case_hitting_set, is_compound_poisson, kesten_hitting, BretagnolleCase, CaseLabel, HittingSet};
use crate::conditions::{
    check_cba, check_kf, check_loglog_local, check_nd, check_rao, check_repsi_growth, check_s, check_sym, check_thm25,
    check_thm26, cite, GrowthFunctionFamily, GrowthVariant, Settings, Status, Verdict,
};
use crate::exponent::ExponentHandle;
use crate::model::{sum_triplets, LevyMeasure, LevyTriplet, Side};
use crate::pairs::{check_bg_rule, check_im_domination, check_pro312, check_pro43, Pro312Variant, SplitWitness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Computed,
    Asserted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainEntry {
    pub rule: String,
    pub tag: String,
    pub anchor: Option<String>,
    pub evidence: BTreeMap<String, Value>,
    pub source: Source,
}

impl ChainEntry {
    fn new(rule: &str, source: Source) -> Self {
        let c = cite(rule);
        Self { rule: c.rule, tag: c.tag, anchor: c.anchor, evidence: BTreeMap::new(), source }
    }

    fn from_verdict(v: &Verdict) -> Self {
        let mut e = Self::new(&v.citations[0].rule, Source::Computed);
        e.evidence = v.evidence.clone();
        e
    }

    fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.evidence.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }
}

/// Facts supplied by the caller instead of computed. In a sum they refer to X1.
#[derive(Debug, Default)]
pub struct Assertions {
    pub h_holds: bool,
    pub bounded_resolvent: bool,
    pub has_densities: bool,
    pub witness: Option<SplitWitness>,
    pub family: Option<GrowthFunctionFamily>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HReport {
    pub verdict: Verdict,
    pub case: Option<BretagnolleCase>,
    pub hitting_set: HittingSet,
    pub chain: Vec<ChainEntry>,
    /// every rule tried, with the status of its deciding check
    pub considered: Vec<(String, Status)>,
}

struct Builder {
    case: Option<BretagnolleCase>,
    hitting_set: HittingSet,
    considered: Vec<(String, Status)>,
    caveats: Vec<String>,
}

impl Builder {
    fn new() -> Self {
        Self { case: None, hitting_set: HittingSet::Unknown, considered: Vec::new(), caveats: Vec::new() }
    }

    fn note(&mut self, rule: &str, v: &Verdict) {
        self.considered.push((rule.to_string(), v.status));
        for c in &v.caveats {
            if !self.caveats.contains(c) {
                self.caveats.push(c.clone());
            }
        }
    }

    fn finish(self, status: Status, rule: &str, chain: Vec<ChainEntry>) -> HReport {
        let mut verdict = Verdict::new(status, rule);
        for e in &chain {
            verdict.evidence.insert(e.rule.clone(), Value::Object(e.evidence.clone().into_iter().collect()));
            if !verdict.citations.iter().any(|c| c.rule == e.rule) {
                verdict.citations.push(cite(&e.rule));
            }
        }
        verdict.caveats = self.caveats;
        HReport { verdict, case: self.case, hitting_set: self.hitting_set, chain, considered: self.considered }
    }
}

pub fn h_verdict(h: &ExponentHandle, s: &Settings) -> HReport {
    h_verdict_with(h, &Assertions::default(), s)
}

fn case_rule(c: CaseLabel) -> &'static str {
    match c {
        CaseLabel::A => "case-a",
        CaseLabel::B => "case-b",
        CaseLabel::C1 => "case-c1",
        CaseLabel::C2 => "case-c2",
        CaseLabel::C3 => "case-c3",
    }
}

/// Density hypothesis: computed Hartman-Wintner growth or the caller's word.
fn density_gate(h: &ExponentHandle, asserted: bool, s: &Settings, b: &mut Builder) -> Option<ChainEntry> {
    let hw = check_repsi_growth(h, GrowthVariant::Hw, s);
    b.note("hw", &hw);
    if hw.holds() {
        Some(ChainEntry::new("density-gate", Source::Computed).with("hw", &hw.evidence))
    } else if asserted {
        Some(ChainEntry::new("density-gate", Source::Asserted))
    } else {
        None
    }
}

/// Largest ratio of reflected negative to positive jump density on a grid,
/// used as the constant k when trying the one-sided domination criterion.
fn guess_k(t: &LevyTriplet) -> Option<f64> {
    let parts = t.mu.parts();
    let neg = parts.side(Side::Neg).reflected();
    let pos = parts.side(Side::Pos);
    if neg.clone().cleaned().is_empty() {
        return Some(0.0);
    }
    let mut k: f64 = 0.0;
    for i in 0..=240 {
        let x = 10f64.powf(-12.0 + i as f64 * 0.05);
        let (n, p) = (neg.density(x), pos.density(x));
        if n > 0.0 {
            if p <= 0.0 {
                return None;
            }
            k = k.max(n / p);
        }
    }
    Some(k * (1.0 + 1e-9))
}

/// Applies the single-process rules in priority order.
pub fn h_verdict_with(h: &ExponentHandle, a: &Assertions, s: &Settings) -> HReport {
    let t = h.triplet();
    let mut b = Builder::new();

    if t.dim == 1 {
        let case = bretagnolle_case(t).expect("one-dimensional");
        b.case = Some(case.clone());
        b.hitting_set = case_hitting_set(&case).unwrap_or(HittingSet::Unknown);
        let case_entry = ChainEntry::new(case_rule(case.case), Source::Computed)
            .with("a_prime", case.a_prime)
            .with("compound_poisson", case.compound_poisson);
        match case.case {
            CaseLabel::A => {
                b.considered.push(("case-a".into(), Status::Holds));
                return b.finish(Status::Holds, "case-a", vec![case_entry, ChainEntry::new("semipolar-empty", Source::Computed)]);
            }
            CaseLabel::C2 | CaseLabel::C3 if !case.compound_poisson => {
                let rule = case_rule(case.case);
                b.considered.push((rule.into(), Status::Fails));
                return b.finish(Status::Fails, rule, vec![case_entry, ChainEntry::new("semipolar-singletons", Source::Computed)]);
            }
            CaseLabel::B => match kesten_hitting(h, s) {
                Ok(k) => {
                    b.hitting_set = k.hitting_set;
                    let status = if k.hitting_set == HittingSet::AllReals { Status::Holds } else { Status::Unknown };
                    b.considered.push(("kesten".into(), status));
                    if k.hitting_set == HittingSet::AllReals {
                        let entry = if k.shortcut {
                            ChainEntry::new("kesten-shortcut", Source::Computed).with(
                                "finite_variation_side",
                                if crate::model::variation_integral(&t.mu, Side::Pos).is_finite() { "positive" } else { "negative" },
                            )
                        } else {
                            let r = k.integral.as_ref().expect("integral report");
                            ChainEntry::new("kesten-integral", Source::Computed)
                                .with("value", r.value())
                                .with("tail_exponent", r.tail_exponent)
                        };
                        return b.finish(Status::Holds, "case-b", vec![case_entry, entry, ChainEntry::new("semipolar-empty", Source::Computed)]);
                    }
                }
                Err(e) => b.caveats.push(format!("Kesten test failed: {e}")),
            },
            _ => {}
        }
    }

    if let Some(gate) = density_gate(h, a.has_densities, s, &mut b) {
        let checks: [(&str, Box<dyn Fn() -> Verdict>); 5] = [
            ("nd", Box::new(|| check_nd(t))),
            ("sym", Box::new(|| check_sym(h, s))),
            ("kf", Box::new(|| check_kf(h, s))),
            ("rao", Box::new(|| check_rao(h, None, s))),
            ("cba", Box::new(|| check_cba(h, s))),
        ];
        for (id, run) in checks {
            let v = run();
            b.note(id, &v);
            if v.holds() {
                return b.finish(Status::Holds, "diagram", vec![gate, ChainEntry::from_verdict(&v), ChainEntry::new("diagram", Source::Computed)]);
            }
        }
    } else {
        b.considered.push(("density-gate".into(), Status::Unknown));
    }

    let sv = check_s(t);
    b.note("s", &sv);
    if sv.holds() {
        return b.finish(Status::Holds, "s", vec![ChainEntry::from_verdict(&sv), ChainEntry::new("diagram", Source::Computed)]);
    }

    if t.dim == 1 {
        if let Some(k) = guess_k(t) {
            let v = check_thm25(t, k, 1.0, &LevyMeasure::zero());
            b.note("thm25", &v);
            if v.holds() {
                return b.finish(Status::Holds, "thm25", vec![ChainEntry::from_verdict(&v)]);
            }
        }
        let v = check_thm26(t, s);
        b.note("thm26", &v);
        if v.holds() {
            let mut e = ChainEntry::from_verdict(&v);
            e.evidence.remove("grid");
            return b.finish(Status::Holds, "thm26", vec![e]);
        }
        let v = check_repsi_growth(h, GrowthVariant::Log, s);
        b.note("repsi-log", &v);
        if v.holds() {
            return b.finish(Status::Holds, "repsi-log", vec![ChainEntry::from_verdict(&v)]);
        }
        let v = check_loglog_local(t, s);
        b.note("loglog", &v);
        if v.holds() {
            let mut e = ChainEntry::from_verdict(&v);
            e.evidence.remove("grid");
            return b.finish(Status::Holds, "loglog", vec![e]);
        }
    }
    b.finish(Status::Unknown, "diagram", Vec::new())
}

fn h1_entry(h1: &ExponentHandle, a: &Assertions, s: &Settings, b: &mut Builder) -> Option<ChainEntry> {
    if a.h_holds {
        return Some(ChainEntry::new("asserted-h1", Source::Asserted));
    }
    let r = h_verdict_with(h1, &Assertions { has_densities: a.has_densities, ..Default::default() }, s);
    b.considered.push(("h(x1)".into(), r.verdict.status));
    r.verdict.holds().then(|| {
        let rules: Vec<&str> = r.chain.iter().map(|e| e.rule.as_str()).collect();
        ChainEntry::new(&r.verdict.citations[0].rule, Source::Computed).with("chain", rules)
    })
}

fn bounded_resolvent(t: &LevyTriplet, h: &ExponentHandle, s: &Settings) -> bool {
    if t.dim != 1 {
        return false;
    }
    let brownian = t.q[(0, 0)] > 0.0 && t.mu.is_zero() && t.a[0] == 0.0;
    brownian
        || matches!(bretagnolle_case(t), Ok(c) if c.case == CaseLabel::B)
            && kesten_hitting(h, s).is_ok_and(|k| k.hitting_set == HittingSet::AllReals)
}

/// Pair rules for X1 + X2, then the single-process rules on the summed triplet.
pub fn h_verdict_sum(h1: &ExponentHandle, h2: &ExponentHandle, a: &Assertions, s: &Settings) -> crate::error::Result<HReport> {
    let (t1, t2) = (h1.triplet(), h2.triplet());
    let sum = sum_triplets(t1, t2)?;
    let mut b = Builder::new();
    let mut caveats = Vec::new();

    let h1_holds = h1_entry(h1, a, s, &mut b);

    // compound Poisson perturbation, in either order
    if let Some(e) = &h1_holds {
        if is_compound_poisson(t2) {
            b.considered.push(("thm31".into(), Status::Holds));
            let cp = ChainEntry::new("thm31", Source::Computed).with("perturbed", "x2").with("mass", t2.mu.total_mass().to_f64());
            return Ok(b.finish(Status::Holds, "thm31", vec![e.clone(), cp]));
        }
    }
    if is_compound_poisson(t1) {
        let r2 = h_verdict(h2, s);
        b.considered.push(("h(x2)".into(), r2.verdict.status));
        if r2.verdict.holds() {
            let rules: Vec<&str> = r2.chain.iter().map(|e| e.rule.as_str()).collect();
            let e2 = ChainEntry::new(&r2.verdict.citations[0].rule, Source::Computed).with("chain", rules).with("process", "x2");
            let cp = ChainEntry::new("thm31", Source::Computed).with("perturbed", "x1").with("mass", t1.mu.total_mass().to_f64());
            return Ok(b.finish(Status::Holds, "thm31", vec![e2, cp]));
        }
    }

    let (s1, s2) = (check_s(t1), check_s(t2));
    b.note("s", &s1);
    b.note("s", &s2);
    if s1.holds() && s2.holds() {
        let e1 = ChainEntry::from_verdict(&s1).with("process", "x1");
        let e2 = ChainEntry::from_verdict(&s2).with("process", "x2");
        return Ok(b.finish(Status::Holds, "thm32", vec![e1, e2, ChainEntry::new("thm32", Source::Computed)]));
    }

    if let Some(h1e) = &h1_holds {
        let im = check_im_domination(h1, h2, s);
        b.note("im-domination", &im);

        if im.holds() {
            if let Some(gate) = density_gate(h1, a.has_densities, s, &mut b) {
                for variant in [Pro312Variant::I, Pro312Variant::Ii, Pro312Variant::Iii] {
                    let v = check_pro312(h1, h2, variant, s);
                    b.note(variant.rule(), &v);
                    if v.holds() {
                        let chain = vec![
                            h1e.clone(),
                            gate,
                            ChainEntry::from_verdict(&v),
                            ChainEntry::from_verdict(&im),
                            ChainEntry::new("thm41", Source::Computed),
                        ];
                        return Ok(b.finish(Status::Holds, "thm41", chain));
                    }
                }
            }

            let resolvent = if bounded_resolvent(t1, h1, s) {
                Some(ChainEntry::new("bounded-resolvent", Source::Computed))
            } else if a.bounded_resolvent {
                caveats.push("bounded resolvent densities of X1 asserted".to_string());
                Some(ChainEntry::new("bounded-resolvent", Source::Asserted))
            } else {
                None
            };
            b.considered.push(("bounded-resolvent".into(), if resolvent.is_some() { Status::Holds } else { Status::Unknown }));
            if let Some(r) = resolvent {
                b.caveats.extend(caveats);
                let chain = vec![h1e.clone(), r, ChainEntry::from_verdict(&im), ChainEntry::new("cor42", Source::Computed)];
                return Ok(b.finish(Status::Holds, "cor42", chain));
            }
        }
    }

    if let Some(w) = &a.witness {
        let f = a.family.unwrap_or(GrowthFunctionFamily::Log(1.0));
        let v = check_pro43(h1, h2, w, f, s).unwrap_or_else(|e| Verdict::unknown("pro43", e.to_string()));
        b.note("pro43", &v);
        if v.holds() {
            let mut e = ChainEntry::from_verdict(&v);
            e.source = Source::Asserted;
            return Ok(b.finish(Status::Holds, "pro43", vec![e]));
        }
    }

    if let Some(h1e) = &h1_holds {
        let v = check_bg_rule(h1, h2, s);
        b.note("bg-rule", &v);
        if v.holds() {
            return Ok(b.finish(Status::Holds, "bg-rule", vec![h1e.clone(), ChainEntry::from_verdict(&v)]));
        }
    }

    let r = h_verdict(&ExponentHandle::new(sum), s);
    b.considered.extend(r.considered);
    b.caveats.extend(r.verdict.caveats.iter().cloned().filter(|c| !b.caveats.contains(c)).collect::<Vec<_>>());
    b.case = r.case;
    b.hitting_set = r.hitting_set;
    let rule = r.verdict.citations.first().map(|c| c.rule.clone()).unwrap_or_else(|| "sum-fallback".into());
    let mut chain = vec![ChainEntry::new("sum-fallback", Source::Computed)];
    if r.verdict.status == Status::Unknown {
        return Ok(b.finish(Status::Unknown, "sum-fallback", Vec::new()));
    }
    chain.extend(r.chain);
    Ok(b.finish(r.verdict.status, &rule, chain))
}
