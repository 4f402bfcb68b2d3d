use std::collections::BTreeMap;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Fails,
    Unknown,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Unknown => "unknown",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Citation {
    pub rule: String,
    pub tag: String,
    pub anchor: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
struct RuleEntry {
    tag: String,
    anchor: Option<String>,
}

static RULES: LazyLock<BTreeMap<String, RuleEntry>> =
    LazyLock::new(|| serde_json::from_str(include_str!("../../data/rules.json")).expect("rules table parses"));

/// Looks up the citation for a rule id. Unknown ids are a programming error.
pub fn cite(rule: &str) -> Citation {
    let e = RULES.get(rule).unwrap_or_else(|| panic!("no rule entry for {rule}"));
    Citation { rule: rule.to_string(), tag: e.tag.clone(), anchor: e.anchor.clone() }
}

pub fn rule_ids() -> impl Iterator<Item = &'static str> {
    RULES.keys().map(|s| s.as_str())
}

pub const FINITE_GRID_CAVEAT: &str = "asymptotic check on finite grid";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub evidence: BTreeMap<String, Value>,
    pub citations: Vec<Citation>,
    pub caveats: Vec<String>,
}

impl Verdict {
    pub fn new(status: Status, rule: &str) -> Self {
        Self { status, evidence: BTreeMap::new(), citations: vec![cite(rule)], caveats: Vec::new() }
    }

    pub fn unknown(rule: &str, caveat: impl Into<String>) -> Self {
        Self::new(Status::Unknown, rule).caveat(caveat)
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.evidence.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }

    pub fn caveat(mut self, c: impl Into<String>) -> Self {
        let c = c.into();
        if !self.caveats.contains(&c) {
            self.caveats.push(c);
        }
        self
    }

    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn fails(&self) -> bool {
        self.status == Status::Fails
    }

    pub fn number(&self, key: &str) -> Option<f64> {
        self.evidence.get(key).and_then(Value::as_f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_rule_has_a_tag() {
        for id in rule_ids() {
            assert!(!cite(id).tag.is_empty(), "{id}");
        }
        assert!(cite("case-c2").anchor.unwrap().contains("not a regular point"));
    }

    #[test]
    fn status_serializes_lowercase() {
        assert_eq!(serde_json::to_string(&Status::Holds).unwrap(), "\"holds\"");
        let v = Verdict::new(Status::Fails, "nd").with("rank", 0);
        assert_eq!(v.number("rank"), Some(0.0));
    }
}
