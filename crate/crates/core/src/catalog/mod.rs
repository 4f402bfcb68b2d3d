//! Named reference processes and their expected outcomes.

use std::collections::BTreeMap;
use std::sync::{Arc, LazyLock};

use num_complex::Complex64;
use serde::Deserialize;

use crate::classifier::{CaseLabel, HittingSet};
use crate::conditions::Status;
use crate::error::{HuntError, Result};
use crate::model::{Atom, LevyComponent, LevyMeasure, LevyTriplet, PowerTerm, TypeAlphaBetaDensity};

pub type ClosedForm = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Expected classification, in the shape of the command-line report with
/// the chain reduced to rule ids.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenReport {
    pub verdict: Status,
    #[serde(default)]
    pub case: Option<CaseLabel>,
    #[serde(default)]
    pub hitting_set: Option<HittingSet>,
    pub chain: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub classify: GoldenReport,
    /// checker id to status, for the checkers the entry pins
    #[serde(default)]
    pub checks: BTreeMap<String, Status>,
    #[serde(default)]
    pub beta2: Option<f64>,
    /// classification of the entry plus its partner, with H of the entry asserted
    #[serde(default)]
    pub sum_asserted: Option<GoldenReport>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct GoldenEntry {
    description: String,
    /// coefficient C in psi(z) = C |z|^alpha, from quadrature of the Levy-Khintchine integrand at z = 1
    #[serde(default)]
    psi_constant: Option<f64>,
    expected: Expected,
}

static GOLDEN: LazyLock<BTreeMap<String, GoldenEntry>> =
    LazyLock::new(|| serde_json::from_str(include_str!("../../data/golden.json")).expect("golden table parses"));

#[derive(Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    pub triplet: LevyTriplet,
    /// second process for pair entries
    pub partner: Option<LevyTriplet>,
    pub closed_form_psi: Option<ClosedForm>,
    pub expected: Expected,
}

impl std::fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CatalogEntry").field("name", &self.name).field("triplet", &self.triplet).finish()
    }
}

fn stable(alpha: f64, cp: f64, cm: f64, cutoff: f64) -> LevyMeasure {
    LevyMeasure::new(vec![LevyComponent::StablePower { alpha, c_plus: cp, c_minus: cm, cutoff }])
}

fn atoms(a: &[(f64, f64)]) -> LevyMeasure {
    LevyMeasure::new(vec![LevyComponent::Atoms(a.iter().map(|&(x, w)| Atom::scalar(x, w)).collect())])
}

/// Density x^{-1-index} on (0, 1], bracketed as type-(alpha, beta), with a' = 0.
pub fn type_subordinator(index: f64, alpha: f64, beta: f64) -> LevyTriplet {
    let d = TypeAlphaBetaDensity { terms: vec![PowerTerm { scale: 1.0, index }], alpha, beta, c: 2.0 };
    LevyTriplet::scalar(-1.0 / (1.0 - index), 0.0, LevyMeasure::new(vec![LevyComponent::TypeAlphaBeta(d)])).expect("valid")
}

fn symmetric_stable_form(alpha: f64, c: f64) -> ClosedForm {
    Arc::new(move |z: f64| Complex64::new(c * z.abs().powf(alpha), 0.0))
}

fn build(name: &str, g: &GoldenEntry) -> (LevyTriplet, Option<LevyTriplet>, Option<ClosedForm>) {
    let inf = f64::INFINITY;
    let scalar = |a, q, mu| LevyTriplet::scalar(a, q, mu).expect("valid");
    let c = g.psi_constant;
    match name {
        "brownian" => (scalar(0.0, 1.0, LevyMeasure::zero()), None, Some(Arc::new(|z: f64| Complex64::new(0.5 * z * z, 0.0)))),
        "drifted-brownian" => (scalar(1.0, 1.0, LevyMeasure::zero()), None, Some(Arc::new(|z: f64| Complex64::new(0.5 * z * z, z)))),
        "symmetric-stable-0.5" => (scalar(0.0, 0.0, stable(0.5, 1.0, 1.0, inf)), None, c.map(|c| symmetric_stable_form(0.5, c))),
        "symmetric-stable-1.0" => (scalar(0.0, 0.0, stable(1.0, 1.0, 1.0, inf)), None, c.map(|c| symmetric_stable_form(1.0, c))),
        "symmetric-stable-1.5" => (scalar(0.0, 0.0, stable(1.5, 1.0, 1.0, inf)), None, c.map(|c| symmetric_stable_form(1.5, c))),
        "asymmetric-cauchy" => (scalar(0.0, 0.0, stable(1.0, 1.0, 0.5, inf)), None, None),
        "spectrally-positive-stable-1.5" => (scalar(0.0, 0.0, stable(1.5, 1.0, 0.0, inf)), None, None),
        // a = -int_0^1 x^{-0.5} dx cancels the compensator
        "stable-subordinator-0.5" => (scalar(-2.0, 0.0, stable(0.5, 1.0, 0.0, inf)), None, None),
        // a' = a + 0.5 = 0
        "compound-poisson" => (
            scalar(-0.5, 0.0, atoms(&[(0.5, 1.0), (-2.0, 0.5)])),
            None,
            Some(Arc::new(|z: f64| {
                let e = |x: f64| Complex64::new(0.0, z * x).exp();
                (1.0 - e(0.5)) + 0.5 * (1.0 - e(-2.0))
            })),
        ),
        "drifted-compound-poisson" => (scalar(0.5, 0.0, atoms(&[(0.5, 1.0), (2.0, 0.5)])), None, None),
        // int_0^1 x^{-0.5} dx = 2, so a' = -1 + 2 = 1
        "c2-failure" => (scalar(-1.0, 0.0, stable(0.5, 1.0, 0.0, 1.0)), None, None),
        "example-2.9" => (scalar(0.0, 0.0, LevyMeasure::new(vec![LevyComponent::LogSingular { c: 1.0, delta: 0.5 }])), None, None),
        "type-alpha-beta-pair" => (type_subordinator(0.75, 0.7, 0.8), Some(type_subordinator(0.25, 0.2, 0.3)), None),
        "brownian-2d" => (
            LevyTriplet::new(vec![0.0, 0.0], vec![vec![1.0, 0.0], vec![0.0, 1.0]], LevyMeasure::zero()).expect("valid"),
            None,
            Some(Arc::new(|z: f64| Complex64::new(0.5 * z * z, 0.0))),
        ),
        // jumps off the range of sqrt(Q) with finite mass, drift inside it
        "planar-s-process" => (
            LevyTriplet::new(
                vec![0.5, 0.0],
                vec![vec![1.0, 0.0], vec![0.0, 0.0]],
                LevyMeasure::new(vec![LevyComponent::Atoms(vec![Atom::new(vec![0.0, 1.0], 1.0), Atom::new(vec![1.0, 2.0], 0.5)])]),
            )
            .expect("valid"),
            None,
            None,
        ),
        _ => unreachable!("golden entry without a builder: {name}"),
    }
}

pub fn catalog_list() -> Vec<String> {
    GOLDEN.keys().cloned().collect()
}

pub fn catalog_get(name: &str) -> Result<CatalogEntry> {
    let g = GOLDEN.get(name).ok_or_else(|| HuntError::UnknownName(name.to_string()))?;
    let (triplet, partner, closed_form_psi) = build(name, g);
    Ok(CatalogEntry { name: name.to_string(), description: g.description.clone(), triplet, partner, closed_form_psi, expected: g.expected.clone() })
}

pub fn psi_constant(name: &str) -> Option<f64> {
    GOLDEN.get(name).and_then(|g| g.psi_constant)
}

#[cfg(test)]
mod tests;
