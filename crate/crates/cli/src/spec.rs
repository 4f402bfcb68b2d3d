//! Process spec files: parsing, validation and conversion from triplets.

use hunt_core::catalog::catalog_get;
use hunt_core::model::{Atom, LevyComponent, LevyMeasure, LevyTriplet, PowerTerm, TypeAlphaBetaDensity};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Numbers that may be infinite, written as "inf" / "-inf" in JSON.
mod extended {
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) if t == "inf" => Ok(f64::INFINITY),
            Repr::Text(t) if t == "-inf" => Ok(f64::NEG_INFINITY),
            Repr::Text(t) => Err(serde::de::Error::custom(format!("expected a number, \"inf\" or \"-inf\", got {t:?}"))),
        }
    }
}

fn infinite() -> f64 {
    f64::INFINITY
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub x: Vec<f64>,
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub scale: f64,
    pub index: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ComponentSpec {
    StablePower {
        alpha: f64,
        c_plus: f64,
        c_minus: f64,
        #[serde(with = "extended", default = "infinite")]
        cutoff: f64,
    },
    LogSingular {
        c: f64,
        delta: f64,
    },
    Atoms {
        atoms: Vec<AtomSpec>,
    },
    TypeAlphaBeta {
        terms: Vec<TermSpec>,
        alpha: f64,
        beta: f64,
        c: f64,
    },
    Restricted {
        inner: Box<ComponentSpec>,
        scale: f64,
        #[serde(with = "extended")]
        lo: f64,
        #[serde(with = "extended")]
        hi: f64,
    },
    Reflected {
        inner: Box<ComponentSpec>,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpec {
    pub components: Vec<ComponentSpec>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssertSpec {
    #[serde(default)]
    pub h_holds: bool,
    #[serde(default)]
    pub bounded_resolvent: bool,
    #[serde(default)]
    pub has_densities: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessSpecFile {
    pub dim: usize,
    pub a: Vec<f64>,
    #[serde(rename = "Q")]
    pub q: Vec<Vec<f64>>,
    #[serde(default)]
    pub levy_measure: MeasureSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assert: Option<AssertSpec>,
}

impl ComponentSpec {
    pub fn to_component(&self) -> LevyComponent {
        match self {
            ComponentSpec::StablePower { alpha, c_plus, c_minus, cutoff } => {
                LevyComponent::StablePower { alpha: *alpha, c_plus: *c_plus, c_minus: *c_minus, cutoff: *cutoff }
            }
            ComponentSpec::LogSingular { c, delta } => LevyComponent::LogSingular { c: *c, delta: *delta },
            ComponentSpec::Atoms { atoms } => LevyComponent::Atoms(atoms.iter().map(|a| Atom::new(a.x.clone(), a.w)).collect()),
            ComponentSpec::TypeAlphaBeta { terms, alpha, beta, c } => LevyComponent::TypeAlphaBeta(TypeAlphaBetaDensity {
                terms: terms.iter().map(|t| PowerTerm { scale: t.scale, index: t.index }).collect(),
                alpha: *alpha,
                beta: *beta,
                c: *c,
            }),
            ComponentSpec::Restricted { inner, scale, lo, hi } => {
                LevyComponent::Restricted { inner: Box::new(inner.to_component()), scale: *scale, lo: *lo, hi: *hi }
            }
            ComponentSpec::Reflected { inner } => LevyComponent::Reflected(Box::new(inner.to_component())),
        }
    }

    pub fn from_component(c: &LevyComponent) -> Self {
        match c {
            LevyComponent::StablePower { alpha, c_plus, c_minus, cutoff } => {
                ComponentSpec::StablePower { alpha: *alpha, c_plus: *c_plus, c_minus: *c_minus, cutoff: *cutoff }
            }
            LevyComponent::LogSingular { c, delta } => ComponentSpec::LogSingular { c: *c, delta: *delta },
            LevyComponent::Atoms(atoms) => ComponentSpec::Atoms { atoms: atoms.iter().map(|a| AtomSpec { x: a.x.clone(), w: a.w }).collect() },
            LevyComponent::TypeAlphaBeta(d) => ComponentSpec::TypeAlphaBeta {
                terms: d.terms.iter().map(|t| TermSpec { scale: t.scale, index: t.index }).collect(),
                alpha: d.alpha,
                beta: d.beta,
                c: d.c,
            },
            LevyComponent::Restricted { inner, scale, lo, hi } => {
                ComponentSpec::Restricted { inner: Box::new(Self::from_component(inner)), scale: *scale, lo: *lo, hi: *hi }
            }
            LevyComponent::Reflected(inner) => ComponentSpec::Reflected { inner: Box::new(Self::from_component(inner)) },
        }
    }
}

impl MeasureSpec {
    pub fn to_measure(&self) -> LevyMeasure {
        LevyMeasure::new(self.components.iter().map(ComponentSpec::to_component).collect())
    }
}

impl ProcessSpecFile {
    pub fn from_triplet(t: &LevyTriplet) -> Self {
        let q = (0..t.dim).map(|i| (0..t.dim).map(|j| t.q[(i, j)]).collect()).collect();
        Self {
            dim: t.dim,
            a: t.a.clone(),
            q,
            levy_measure: MeasureSpec { components: t.mu.components.iter().map(ComponentSpec::from_component).collect() },
            assert: None,
        }
    }

    pub fn to_triplet(&self) -> Result<LevyTriplet, CliError> {
        if self.a.len() != self.dim || self.q.len() != self.dim || self.q.iter().any(|r| r.len() != self.dim) {
            return Err(CliError::Spec(format!("dim is {} but a or Q has a different size", self.dim)));
        }
        LevyTriplet::new(self.a.clone(), self.q.clone(), self.levy_measure.to_measure()).map_err(|e| CliError::Spec(e.to_string()))
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Spec(format!("invalid spec at line {} column {}: {e}", e.line(), e.column())))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("spec serializes");
        s.push('\n');
        s
    }
}

/// Reads a spec from a path, or from the catalog for "preset:<name>"
/// ("preset:<name>:partner" for the second process of a pair entry).
pub fn load(source: &str) -> Result<ProcessSpecFile, CliError> {
    if let Some(name) = source.strip_prefix("preset:") {
        let (name, partner) = match name.strip_suffix(":partner") {
            Some(n) => (n, true),
            None => (name, false),
        };
        let e = catalog_get(name).map_err(|e| CliError::Spec(e.to_string()))?;
        let t = if partner { e.partner.ok_or_else(|| CliError::Spec(format!("{name} has no partner process")))? } else { e.triplet };
        return Ok(ProcessSpecFile::from_triplet(&t));
    }
    let text = std::fs::read_to_string(source).map_err(|e| CliError::Spec(format!("cannot read {source}: {e}")))?;
    ProcessSpecFile::parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_with_infinite_bounds() {
        let text = r#"{"dim":1,"a":[0.5],"Q":[[0.0]],"levy_measure":{"components":[
            {"type":"stable_power","alpha":1.5,"c_plus":1.0,"c_minus":0.5},
            {"type":"restricted","inner":{"type":"log_singular","c":1.0,"delta":0.5},"scale":2.0,"lo":0.1,"hi":"inf"},
            {"type":"atoms","atoms":[{"x":[2.0],"w":1.0}]}]}}"#;
        let spec = ProcessSpecFile::parse(text).unwrap();
        let t = spec.to_triplet().unwrap();
        let again = ProcessSpecFile::from_triplet(&t);
        assert_eq!(again, spec);
        assert_eq!(ProcessSpecFile::parse(&again.to_json()).unwrap().to_json(), again.to_json());
        assert!(again.to_json().contains("\"cutoff\": \"inf\""));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        for bad in [
            r#"{"dim":1,"a":[0],"Q":[[1]],"extra":1}"#,
            r#"{"dim":1,"a":[0],"Q":[[1]],"levy_measure":{"components":[{"type":"atoms","atoms":[],"w":1}]}}"#,
            r#"{"dim":1,"a":[0],"Q":[[1]],"assert":{"h1":true}}"#,
        ] {
            assert!(matches!(ProcessSpecFile::parse(bad), Err(CliError::Spec(_))), "{bad}");
        }
    }

    #[test]
    fn sizes_are_checked() {
        let spec = ProcessSpecFile::parse(r#"{"dim":2,"a":[0],"Q":[[1]]}"#).unwrap();
        assert!(spec.to_triplet().is_err());
        assert!(load("preset:no-such").is_err());
        assert_eq!(load("preset:brownian").unwrap().q, vec![vec![1.0]]);
        assert_eq!(load("preset:type-alpha-beta-pair:partner").unwrap().dim, 1);
    }
}
