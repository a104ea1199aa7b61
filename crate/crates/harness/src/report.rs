//! The verification report: a single JSON document, plus a CSV view of the
//! per-cell counts.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nilorbit::FieldSpec;
use serde::{Deserialize, Serialize};

use crate::config::{opt_field, CampaignConfig, Check};

/// Records kept per cell for each outcome kind; the counts stay exact.
pub const MAX_RECORDED: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Inconclusive,
    Violation,
}

/// Everything observed in one trial. Enough to replay it: the id names the
/// check, field, cell and trial index, `stream` is the generator key, and the
/// matrices include any conjugator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stream: Option<String>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub matrices: BTreeMap<String, String>,
    /// Ordered `(label, value)` pairs of intermediate quantities.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<(String, String)>,
}

impl TrialRecord {
    pub fn new(id: String) -> Self {
        TrialRecord {
            id,
            stream: None,
            status: Status::Pass,
            message: None,
            matrices: BTreeMap::new(),
            trace: Vec::new(),
        }
    }

    pub fn matrix(&mut self, name: &str, m: impl ToString) {
        self.matrices.insert(name.to_string(), m.to_string());
    }

    pub fn note(&mut self, label: impl Into<String>, value: impl ToString) {
        self.trace.push((label.into(), value.to_string()));
    }

    /// Marks the trial failed; the first message is kept.
    pub fn fail(&mut self, message: impl Into<String>) {
        if self.status != Status::Violation {
            self.status = Status::Violation;
            self.message = Some(message.into());
        }
    }

    pub fn inconclusive(&mut self, message: impl Into<String>) {
        if self.status == Status::Pass {
            self.status = Status::Inconclusive;
            self.message = Some(message.into());
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub trials: u64,
    pub pass: u64,
    pub violation: u64,
    pub inconclusive: u64,
}

impl Counts {
    pub fn record(&mut self, status: Status) {
        self.trials += 1;
        match status {
            Status::Pass => self.pass += 1,
            Status::Violation => self.violation += 1,
            Status::Inconclusive => self.inconclusive += 1,
        }
    }

    pub fn absorb(&mut self, other: &Counts) {
        self.trials += other.trials;
        self.pass += other.pass;
        self.violation += other.violation;
        self.inconclusive += other.inconclusive;
    }

    pub fn status(&self) -> Status {
        if self.violation > 0 {
            Status::Violation
        } else if self.inconclusive > 0 {
            Status::Inconclusive
        } else {
            Status::Pass
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellReport {
    pub key: String,
    #[serde(with = "opt_field")]
    pub field: Option<FieldSpec>,
    /// Name of the trial stream family; trial ids are `"{stream}#{t}"`.
    pub stream: String,
    pub counts: Counts,
    /// SHA-256 over every trial record of the cell, in trial order.
    pub digest: String,
    pub exemplar: Option<TrialRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<TrialRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inconclusive: Vec<TrialRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<TrialRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuardTrip {
    pub n: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: Check,
    pub n_max: usize,
    pub trials: Option<u64>,
    pub status: Status,
    pub counts: Counts,
    pub cells: Vec<CellReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub guard_trips: Vec<GuardTrip>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub tool: String,
    pub version: String,
    pub rng: String,
    pub config: CampaignConfig,
}

impl Meta {
    pub fn current(config: CampaignConfig) -> Self {
        Meta {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            rng: nilorbit::rng::RNG_ID.to_string(),
            config,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub started_unix: u64,
    pub wall_seconds: f64,
    pub per_check: BTreeMap<String, f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Inconclusive,
    Violation,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Violation => 1,
            Verdict::Inconclusive => 3,
        }
    }
}

/// Timing is the last key so that stripping it leaves a byte-identical
/// prefix across runs with the same configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub meta: Meta,
    pub verdict: Verdict,
    pub counts: Counts,
    pub checks: Vec<CheckReport>,
    pub timing: Timing,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// One row per cell.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,field,cell,trials,pass,violation,inconclusive,digest\n");
        for check in &self.checks {
            for cell in &check.cells {
                let field = cell.field.map(|f| f.to_string()).unwrap_or_default();
                let c = &cell.counts;
                writeln!(
                    out,
                    "{},{},\"{}\",{},{},{},{},{}",
                    check.check, field, cell.key, c.trials, c.pass, c.violation, c.inconclusive, cell.digest
                )
                .expect("write to string");
            }
        }
        out
    }

    pub fn find_cell(&self, stream: &str) -> Option<(&CheckReport, &CellReport)> {
        self.checks
            .iter()
            .find_map(|c| c.cells.iter().find(|cell| cell.stream == stream).map(|cell| (c, cell)))
    }

    /// A stored record with this id, if any.
    pub fn find_record(&self, id: &str) -> Option<&TrialRecord> {
        self.checks.iter().flat_map(|c| &c.cells).find_map(|cell| {
            cell.exemplar
                .iter()
                .chain(&cell.violations)
                .chain(&cell.inconclusive)
                .chain(&cell.witnesses)
                .find(|r| r.id == id)
        })
    }
}
