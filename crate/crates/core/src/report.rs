//! The JSON report shared by the command line and the golden table.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::classifier::{BretagnolleCase, HReport, HittingSet, Source};
use crate::conditions::{Settings, Status, Verdict};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub id: String,
    /// human-readable result name
    pub rule: String,
    pub anchor: Option<String>,
    pub evidence: BTreeMap<String, Value>,
    pub source: Source,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub verdict: Status,
    pub case: Option<BretagnolleCase>,
    pub hitting_set: Option<HittingSet>,
    pub chain: Vec<ReportEntry>,
    pub warnings: Vec<String>,
    pub settings: Option<Settings>,
}

impl VerdictReport {
    pub fn from_h(r: &HReport, settings: &Settings) -> Self {
        let chain = r
            .chain
            .iter()
            .map(|e| ReportEntry { id: e.rule.clone(), rule: e.tag.clone(), anchor: e.anchor.clone(), evidence: e.evidence.clone(), source: e.source })
            .collect();
        Self {
            verdict: r.verdict.status,
            case: r.case.clone(),
            hitting_set: r.case.as_ref().map(|_| r.hitting_set),
            chain,
            warnings: r.verdict.caveats.clone(),
            settings: Some(settings.clone()),
        }
    }

    /// A single-condition report. The evidence sits on the first citation.
    pub fn from_verdict(v: &Verdict, settings: &Settings) -> Self {
        let chain = v
            .citations
            .iter()
            .enumerate()
            .map(|(i, c)| ReportEntry {
                id: c.rule.clone(),
                rule: c.tag.clone(),
                anchor: c.anchor.clone(),
                evidence: if i == 0 { v.evidence.clone() } else { BTreeMap::new() },
                source: Source::Computed,
            })
            .collect();
        Self { verdict: v.status, case: None, hitting_set: None, chain, warnings: v.caveats.clone(), settings: Some(settings.clone()) }
    }

    pub fn rule_ids(&self) -> Vec<&str> {
        self.chain.iter().map(|e| e.id.as_str()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Chain as prose with the quoted anchors.
    pub fn to_text(&self) -> String {
        let mut out = format!("verdict: {}\n", self.verdict);
        if let Some(c) = &self.case {
            let _ = write!(out, "case: {:?}", c.case);
            if let Some(a) = c.a_prime {
                let _ = write!(out, " (a' = {a})");
            }
            out.push('\n');
        }
        if let Some(h) = self.hitting_set {
            let _ = writeln!(out, "hitting set: {}", serde_json::to_value(h).unwrap().as_str().unwrap_or(""));
        }
        for (i, e) in self.chain.iter().enumerate() {
            let src = if e.source == Source::Asserted { " [asserted]" } else { "" };
            let _ = writeln!(out, "{}. {}{}", i + 1, e.rule, src);
            if let Some(a) = &e.anchor {
                let _ = writeln!(out, "   \"{a}\"");
            }
            for (k, v) in &e.evidence {
                let _ = writeln!(out, "   {k} = {v}");
            }
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        out
    }
}
