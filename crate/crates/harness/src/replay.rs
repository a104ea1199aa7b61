//! Rerunning a single trial from a report.

use std::fmt::Write as _;

use crate::campaign::{all_cells, cell_records, digest, run_trial, split_id, SUMMARY};
use crate::report::{Meta, Report, TrialRecord};
use crate::HarnessError;

#[derive(Clone, Debug)]
pub struct Replay {
    pub record: TrialRecord,
    /// Comparison with the record stored in the report, when it has one.
    pub stored_match: Option<bool>,
    /// Whether rerunning the whole cell reproduces its digest.
    pub digest_match: bool,
    pub stored_digest: String,
    pub digest: String,
}

impl Replay {
    pub fn reproduced(&self) -> bool {
        self.digest_match && self.stored_match != Some(false)
    }
}

/// Reruns trial `id` under the report's configuration, optionally with a
/// different campaign seed.
pub fn replay(report: &Report, id: &str, seed: Option<u64>) -> Result<Replay, HarnessError> {
    let current = Meta::current(report.meta.config.clone());
    if report.meta.version != current.version || report.meta.rng != current.rng {
        return Err(HarnessError::Stale {
            report: format!("{} {} ({})", report.meta.tool, report.meta.version, report.meta.rng),
            tool: format!("{} {} ({})", current.tool, current.version, current.rng),
        });
    }
    let mut cfg = report.meta.config.clone();
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let (stream, suffix) = split_id(id).ok_or_else(|| HarnessError::UnknownTrial(id.to_string()))?;
    let cell = all_cells(&cfg)
        .into_iter()
        .find(|c| c.stream() == stream)
        .ok_or_else(|| HarnessError::UnknownTrial(id.to_string()))?;
    let (_, stored_cell) = report
        .find_cell(stream)
        .ok_or_else(|| HarnessError::UnknownTrial(id.to_string()))?;

    let records = cell_records(&cfg, &cell);
    let record = if suffix == SUMMARY {
        records
            .iter()
            .find(|r| r.id == id)
            .cloned()
            .ok_or_else(|| HarnessError::UnknownTrial(id.to_string()))?
    } else {
        let t: u64 = suffix.parse().map_err(|_| HarnessError::UnknownTrial(id.to_string()))?;
        if t >= cell.trials {
            return Err(HarnessError::UnknownTrial(format!("{id}: the cell has {} trials", cell.trials)));
        }
        run_trial(&cfg, &cell, t)
    };
    let digest = digest(&records);
    Ok(Replay {
        stored_match: report.find_record(id).map(|stored| stored == &record),
        digest_match: digest == stored_cell.digest,
        stored_digest: stored_cell.digest.clone(),
        digest,
        record,
    })
}

/// Human-readable trace of a replayed trial.
pub fn render(replay: &Replay) -> String {
    let r = &replay.record;
    let mut out = String::new();
    let _ = writeln!(out, "trial   {}", r.id);
    if let Some(s) = &r.stream {
        let _ = writeln!(out, "stream  {s}");
    }
    let _ = writeln!(out, "status  {:?}", r.status);
    if let Some(m) = &r.message {
        let _ = writeln!(out, "message {m}");
    }
    for (name, text) in &r.matrices {
        let _ = writeln!(out, "{name}:");
        if text.is_empty() {
            let _ = writeln!(out, "  (empty)");
        }
        for row in text.split(';').filter(|s| !s.is_empty()) {
            let _ = writeln!(out, "  [{}]", row.replace(',', " "));
        }
    }
    for (label, value) in &r.trace {
        let _ = writeln!(out, "{label:<24} {value}");
    }
    let stored = match replay.stored_match {
        Some(true) => "identical",
        Some(false) => "DIFFERS",
        None => "not stored in report",
    };
    let _ = writeln!(out, "stored record           {stored}");
    let digest = if replay.digest_match { "identical" } else { "DIFFERS" };
    let _ = writeln!(out, "cell digest             {digest} ({})", replay.digest);
    if !replay.digest_match {
        let _ = writeln!(out, "report digest           {}", replay.stored_digest);
    }
    out
}
