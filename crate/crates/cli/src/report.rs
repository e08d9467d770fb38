//! The analysis report and its JSON schema.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Oracle,
    Local,
    Tractable,
    Hierarchy,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Oracle, Method::Local, Method::Tractable, Method::Hierarchy];

    pub fn name(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::Local => "local",
            Method::Tractable => "tractable",
            Method::Hierarchy => "hierarchy",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Outcome {
    True,
    False,
    /// Local reasoning failed to establish the property; it may still hold.
    Unknown,
}

impl Outcome {
    pub fn label(self) -> &'static str {
        match self {
            Outcome::True => "TRUE",
            Outcome::False => "FALSE",
            Outcome::Unknown => "UNKNOWN",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceInfo {
    pub file: String,
    pub digest: String,
    pub variables: usize,
    pub domain: usize,
    pub constraints: usize,
    /// Tuples in the search space, saturating at `u64::MAX`.
    pub space_size: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Finding {
    pub property: String,
    pub args: Vec<String>,
    pub verdict: Outcome,
    pub method: Method,
    /// Counterexample solutions, each listing values in variable order.
    pub evidence: Option<Vec<Vec<String>>>,
    pub elapsed_us: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Summary {
    pub evaluated: usize,
    #[serde(rename = "true")]
    pub holds: usize,
    #[serde(rename = "false")]
    pub fails: usize,
    pub unknown: usize,
    pub listed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisReport {
    pub schema: u32,
    pub instance: InstanceInfo,
    pub methods: Vec<Method>,
    pub dep_max: usize,
    pub group_size: usize,
    pub full_domain: bool,
    pub findings: Vec<Finding>,
    pub summary: Summary,
    pub notes: Vec<String>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<AnalysisReport> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let i = &self.instance;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "instance {} {} ({} variables, {} values, {} constraints, {} tuples)",
            i.file, i.digest, i.variables, i.domain, i.constraints, i.space_size
        );
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        for f in &self.findings {
            let _ = writeln!(out, "{} {} {}  [{}]", f.property, f.args.join(" "), f.verdict.label(), f.method.name());
            for t in f.evidence.iter().flatten() {
                let _ = writeln!(out, "    counterexample ({})", t.join(","));
            }
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "{} evaluated: {} true, {} false, {} unknown; {} listed",
            s.evaluated, s.holds, s.fails, s.unknown, s.listed
        );
        out
    }
}
