//! Single-process condition checkers and the registry that dispatches them by id.

mod diagram;
mod growth;
mod local;
mod pro123;
mod sampling;
mod verdict;

use std::collections::BTreeMap;

pub use diagram::{
    check_cba, check_kf, check_nd, check_rao, check_s, check_sym, is_reflection_invariant, one_sided, range_member,
    GrowthFunctionFamily, RangeCertificate, RangeMembership,
};
pub use growth::{beta2, bg_indices, check_bg, check_repsi_growth, BgIndices, GrowthVariant, BG_UNCERTAINTY};
pub use local::{
    check_loglog_local, check_nu_alpha, check_thm25, check_thm26, check_type_ab_triplet, check_type_alpha_beta, nu_alpha_mass,
};
pub use pro123::pro123_limit;
pub(crate) use diagram::or_unknown;
pub use sampling::{bounded, bounded_for, directions, diverging, positive_liminf, Profile, RatioTest, Settings};
pub use verdict::{cite, rule_ids, Citation, Status, Verdict, FINITE_GRID_CAVEAT};

use crate::error::{HuntError, Result};
use crate::exponent::ExponentHandle;
use crate::model::{Atom, FiniteMeasure, LevyMeasure};

/// Optional inputs some checkers need.
#[derive(Debug, Clone, Default)]
pub struct CheckParams {
    pub family: Option<GrowthFunctionFamily>,
    pub k: Option<f64>,
    pub delta: Option<f64>,
    pub nu: Option<LevyMeasure>,
    pub alpha: Option<f64>,
    pub test_measure: Option<FiniteMeasure>,
}

pub trait Condition: Send + Sync {
    fn id(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn check(&self, h: &ExponentHandle, params: &CheckParams, s: &Settings) -> Result<Verdict>;
}

type CheckFn = fn(&ExponentHandle, &CheckParams, &Settings) -> Result<Verdict>;

struct FnCondition {
    id: &'static str,
    description: &'static str,
    run: CheckFn,
}

impl Condition for FnCondition {
    fn id(&self) -> &'static str {
        self.id
    }
    fn description(&self) -> &'static str {
        self.description
    }
    fn check(&self, h: &ExponentHandle, params: &CheckParams, s: &Settings) -> Result<Verdict> {
        (self.run)(h, params, s)
    }
}

pub struct Registry {
    items: BTreeMap<&'static str, Box<dyn Condition>>,
}

impl Default for Registry {
    fn default() -> Self {
        Self::standard()
    }
}

impl Registry {
    pub fn empty() -> Self {
        Self { items: BTreeMap::new() }
    }

    pub fn register(&mut self, c: Box<dyn Condition>) {
        self.items.insert(c.id(), c);
    }

    pub fn get(&self, id: &str) -> Result<&dyn Condition> {
        self.items.get(id).map(|b| b.as_ref()).ok_or_else(|| HuntError::UnknownName(id.to_string()))
    }

    pub fn ids(&self) -> Vec<&'static str> {
        self.items.keys().copied().collect()
    }

    pub fn check(&self, id: &str, h: &ExponentHandle, params: &CheckParams, s: &Settings) -> Result<Verdict> {
        self.get(id)?.check(h, params, s)
    }

    pub fn standard() -> Self {
        let mut r = Self::empty();
        let table: [(&'static str, &'static str, CheckFn); 15] = [
            ("nd", "Q has full rank", |h, _, _| Ok(check_nd(h.triplet()))),
            ("sym", "symmetric process", |h, _, s| Ok(check_sym(h, s))),
            ("kf", "|Im psi| <= c A", |h, _, s| Ok(check_kf(h, s))),
            ("rao", "|Im psi| <= A f(A)", |h, p, s| Ok(check_rao(h, p.family, s))),
            ("cba", "B <= c A log(2+B) loglog(2+B)", |h, _, s| Ok(check_cba(h, s))),
            ("s", "finite off-range mass and solvable drift equation", |h, _, _| Ok(check_s(h.triplet()))),
            ("thm25", "one-sided domination of the negative jumps", |h, p, _| {
                let (k, delta) = match (p.k, p.delta) {
                    (Some(k), Some(d)) => (k, d),
                    _ => return Err(HuntError::InvalidParameter("thm25 needs k and delta".into())),
                };
                Ok(check_thm25(h.triplet(), k, delta, p.nu.as_ref().unwrap_or(&LevyMeasure::zero())))
            }),
            ("thm26", "liminf of the truncated second moment over eps/|log eps|", |h, _, s| Ok(check_thm26(h.triplet(), s))),
            ("repsi-log", "liminf Re psi / (|z|/log|z|) > 0", |h, _, s| Ok(check_repsi_growth(h, GrowthVariant::Log, s))),
            ("loglog", "the epsilon test with the log log denominator", |h, _, s| Ok(check_loglog_local(h.triplet(), s))),
            ("hw", "Re psi / log(1+|z|) -> inf", |h, _, s| Ok(check_repsi_growth(h, GrowthVariant::Hw, s))),
            ("nu-alpha", "nu_alpha is an infinite measure", |h, p, _| Ok(check_nu_alpha(h.triplet(), p.alpha.unwrap_or(1.0)))),
            ("bg", "Blumenthal-Getoor-type indices", |h, _, s| Ok(check_bg(h, s))),
            ("type-ab", "type-(alpha, beta) density bracket", |h, _, _| Ok(check_type_ab_triplet(h.triplet()))),
            ("pro123", "lambda limit for one test measure", |h, p, s| {
                let nu = match &p.test_measure {
                    Some(nu) => nu.clone(),
                    None => FiniteMeasure::new(vec![Atom::new(vec![0.0; h.dim()], 1.0)])?,
                };
                Ok(pro123_limit(h, &nu, p.family.unwrap_or(GrowthFunctionFamily::Log(1.0)), s))
            }),
        ];
        for (id, description, run) in table {
            r.register(Box::new(FnCondition { id, description, run }));
        }
        r
    }
}
