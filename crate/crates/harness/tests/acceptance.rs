//! Acceptance suite: one line per criterion, each under a pinned time limit.
//!
//! Runs without the libtest harness so that the verdict lines are printed
//! even when every criterion passes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use nilorbit::combinatorics::{d_value, strictly_dominated};
use nilorbit::splitting::{degree_profile, f_lambda, DEFAULT_MAX_TRIALS};
use nilorbit::{Composition, DVector, Field, FieldSpec, Matrix, Partition, Rationals};
use nilorbit_harness::campaign::all_cells;
use nilorbit_harness::config::default_fields;
use nilorbit_harness::replay::replay;
use nilorbit_harness::report::CheckReport;
use nilorbit_harness::{run_campaign, CampaignConfig, Check, Report, Status, Verdict};

type Outcome = Result<String, String>;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_nilorbit")
}

fn scratch() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nilorbit-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("scratch dir");
    dir
}

fn run_bin(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn campaign(check: Check, n_max: usize, trials: Option<u64>, fields: Vec<FieldSpec>) -> CheckReport {
    let cfg = CampaignConfig {
        targets: vec![check],
        n_max: Some(n_max),
        trials,
        fields,
        ..CampaignConfig::default()
    };
    run_campaign(&cfg).checks.remove(0)
}

/// Zero violations and zero inconclusive entries.
fn clean(report: &CheckReport) -> Result<(), String> {
    let bad = report.cells.iter().find(|c| c.counts.status() != Status::Pass);
    match bad {
        None if report.status == Status::Pass => Ok(()),
        None => Err(format!("{} status {:?}", report.check, report.status)),
        Some(cell) => {
            let first = cell.violations.first().or(cell.inconclusive.first());
            Err(format!(
                "{} {}: {:?}",
                cell.stream,
                serde_json::to_string(&cell.counts).unwrap(),
                first.and_then(|r| r.message.clone())
            ))
        }
    }
}

fn partitions_up_to(n: usize) -> usize {
    (2..=n).map(|k| Partition::all(k).len()).sum()
}

fn c1_worked_example() -> Outcome {
    let out = run_bin(&["info", "--nu", "2,1,2", "--format", "json"]);
    ensure(out.status.success(), || format!("exit {:?}", out.status.code()))?;
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let expect = serde_json::json!({
        "nu": [2, 1, 2], "lambda": [3, 2], "d_vector": [1, 2, 3, 2], "dim_u": 8, "dim_orbit": 16
    });
    ensure(v == expect, || format!("got {v}"))?;
    let text = run_bin(&["info", "--nu", "2,1,2"]);
    let text = String::from_utf8_lossy(&text.stdout);
    ensure(text.contains("(3,2)") && text.contains("(1,2,3,2)"), || text.to_string())?;
    Ok("lambda=(3,2) d=(1,2,3,2) dim u_P=8 dim orbit=16".into())
}

fn c2_d_consistency() -> Outcome {
    let r = campaign(Check::DConsistency, 8, None, vec![]);
    clean(&r)?;
    let compositions: u64 = (1..=8).map(|n| 1u64 << (n - 1)).sum();
    // one trial per composition plus the injectivity summary per n
    ensure(r.counts.trials == compositions + 8, || format!("{} trials", r.counts.trials))?;
    Ok(format!("{compositions} compositions, n <= 8"))
}

fn c3_rank_witness() -> Outcome {
    let r = campaign(Check::RankWitness, 12, None, vec![FieldSpec::Rational]);
    clean(&r)?;
    let expected: u64 = (2..=12).map(|i| i - 1).sum();
    ensure(r.counts.pass == expected, || format!("{} of {expected}", r.counts.pass))?;
    Ok(format!("{expected} (i, h) pairs"))
}

fn c4_existence_witness() -> Outcome {
    let r = campaign(Check::ExistenceWitness, 8, None, default_fields());
    clean(&r)?;
    let per_field: u64 = (2..=8).map(|n| (Partition::all(n).len() * (n - 1)) as u64).sum();
    ensure(r.counts.pass == 5 * per_field, || format!("{} passes", r.counts.pass))?;
    Ok(format!("{per_field} (lambda, i) pairs x 5 fields"))
}

fn c5_upperbound_ii() -> Outcome {
    let r = campaign(Check::UpperboundIi, 7, Some(100), default_fields());
    clean(&r)?;
    ensure(r.cells.len() == 5 * partitions_up_to(7), || format!("{} cells", r.cells.len()))?;
    ensure(r.cells.iter().all(|c| c.counts.pass >= 100), || "cell with < 100 samples".into())?;
    Ok(format!("{} samples, each checking every i", r.counts.trials))
}

fn c6_upperbound_i() -> Outcome {
    let r = campaign(Check::UpperboundI, 6, Some(50), default_fields());
    clean(&r)?;
    let pairs: usize = (2..=6).map(|n| Partition::all(n).len() * (n - 1)).sum();
    ensure(r.cells.len() == 5 * pairs, || format!("{} cells", r.cells.len()))?;
    ensure(r.cells.iter().all(|c| c.counts.pass == 51), || "cell without 50 + 1 trials".into())?;
    let coordinate = r.cells.iter().all(|c| {
        c.exemplar.as_ref().is_some_and(|e| e.trace.iter().any(|(k, v)| k == "w" && v == "coordinate"))
    });
    ensure(coordinate, || "coordinate subspace missing".into())?;
    Ok(format!("{} (X, W) pairs", r.counts.trials))
}

fn c7_vanishing() -> Outcome {
    let r = campaign(Check::Vanishing, 7, Some(100), default_fields());
    clean(&r)?;
    let mut pairs = 0;
    for n in 2..=7 {
        for lambda in Partition::all(n) {
            pairs += strictly_dominated(&lambda).len();
        }
    }
    let orbit_cells = r.cells.iter().filter(|c| c.field.is_some());
    ensure(orbit_cells.clone().all(|c| c.counts.pass >= 100), || "cell with < 100 samples".into())?;
    let combinatorial: Vec<_> = r.cells.iter().filter(|c| c.field.is_none()).collect();
    ensure(combinatorial.len() == 6, || "missing combinatorial cells".into())?;
    let counted: usize = combinatorial
        .iter()
        .filter_map(|c| c.exemplar.as_ref())
        .filter_map(|e| e.trace.iter().find(|(k, _)| k == "pairs"))
        .map(|(_, v)| v.parse::<usize>().unwrap())
        .sum();
    ensure(counted == pairs, || format!("{counted} of {pairs} pairs"))?;
    Ok(format!("{} orbit samples, {pairs} dominance pairs", orbit_cells.count() * 100))
}

fn c8_nonvanishing() -> Outcome {
    let r = campaign(Check::Nonvanishing, 6, None, vec![FieldSpec::Rational]);
    clean(&r)?;
    ensure(r.cells.len() == partitions_up_to(6), || format!("{} cells", r.cells.len()))?;
    for cell in &r.cells {
        let w = cell.witnesses.first().ok_or_else(|| format!("{}: no witness", cell.stream))?;
        let trial: u64 = w.id.rsplit_once('#').unwrap().1.parse().unwrap();
        ensure(trial < DEFAULT_MAX_TRIALS, || format!("{}: trial {trial}", w.id))?;
        // recompute from the stored matrix
        let lambda: Partition = cell.key.trim_start_matches("lambda=").parse().unwrap();
        let x = Matrix::parse(&Rationals, &w.matrices["x"]).map_err(|e| e.to_string())?;
        let value = f_lambda(&lambda, &x).map_err(|e| e.to_string())?;
        ensure(!Rationals.is_zero(&value.product), || format!("{}: f vanishes", w.id))?;
        let profile = degree_profile(&x).map_err(|e| e.to_string())?;
        ensure(profile.degrees == DVector::from_partition(&lambda).values(), || format!("{}: profile", w.id))?;
    }
    Ok(format!("{} partitions, full profiles", r.cells.len()))
}

fn c9_symbolic() -> Outcome {
    let r = campaign(Check::TopComponent, 5, Some(5), vec![FieldSpec::Rational]);
    clean(&r)?;
    let compositions: usize = (2..=5).map(|n| Composition::all(n).len()).sum();
    ensure(r.cells.len() == compositions, || format!("{} cells", r.cells.len()))?;
    // five conjugators plus the attainment summary
    ensure(r.cells.iter().all(|c| c.counts.pass == 6), || "cell without 5 samples".into())?;
    let points = r.cells.iter().filter_map(|c| c.exemplar.as_ref()).all(|e| {
        e.trace.iter().any(|(k, v)| k == "specializations_agree" && v == "20/20")
    });
    ensure(points, || "specialization count".into())?;
    Ok(format!("{compositions} compositions x 5 conjugators x 20 points"))
}

fn c10_monomial_bound() -> Outcome {
    let r = campaign(Check::MonomialBound, 5, None, vec![]);
    clean(&r)?;
    let expected: u64 = (2..=5u64).map(|n| (n - 1) << (n - 1)).sum();
    ensure(r.counts.pass == expected, || format!("{} of {expected}", r.counts.pass))?;
    Ok(format!("{expected} (nu, s) pairs"))
}

fn c11_mvdk() -> Outcome {
    let r = campaign(Check::MvdkReduction, 6, Some(100), default_fields());
    clean(&r)?;
    ensure(r.cells.iter().all(|c| c.counts.pass == 100), || "cell with < 100 samples".into())?;
    Ok(format!("{} matrices", r.counts.pass))
}

fn c12_oracles() -> Outcome {
    let r = campaign(Check::OracleEquivalence, 6, Some(100), default_fields());
    clean(&r)?;
    for f in default_fields() {
        let per_field: u64 = r.cells.iter().filter(|c| c.field == Some(f)).map(|c| c.counts.pass).sum();
        ensure(per_field >= 500, || format!("{f}: {per_field} matrices"))?;
    }
    // both sides of the stable-rank comparison take varied values
    let ranks: std::collections::BTreeSet<_> = r
        .cells
        .iter()
        .filter_map(|c| c.exemplar.as_ref())
        .filter_map(|e| e.trace.iter().find(|(k, _)| k == "stable_rank_power").map(|(_, v)| v.clone()))
        .collect();
    ensure(ranks.len() >= 3, || format!("stable ranks {ranks:?}"))?;
    Ok(format!("{} matrices over 5 fields", r.counts.pass))
}

fn strip_timing(text: &str) -> &str {
    text.find(",\n  \"timing\":").map_or(text, |k| &text[..k])
}

fn verify_to(path: &Path, extra: &[&str]) -> Result<String, String> {
    let mut args = vec![
        "verify",
        "--targets",
        "upperbound-i,upperbound-ii,vanishing,nonvanishing,top-component,oracle-equivalence",
        "--n-max",
        "4",
        "--trials",
        "6",
        "--seed",
        "2024",
        "--out",
        path.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    let out = run_bin(&args);
    let code = out.status.code();
    ensure(matches!(code, Some(0) | Some(3) | Some(1)), || format!("verify exit {code:?}"))?;
    std::fs::read_to_string(path).map_err(|e| e.to_string())
}

fn c13_reproducibility() -> Outcome {
    let dir = scratch();
    let (a, b, c) = (dir.join("a.json"), dir.join("b.json"), dir.join("c.json"));
    let ra = verify_to(&a, &[])?;
    let rb = verify_to(&b, &["--threads", "1"])?;
    ensure(strip_timing(&ra) == strip_timing(&rb), || "reports differ between runs".into())?;
    ensure(strip_timing(&ra).len() + 100 < ra.len(), || "timing block not found".into())?;

    // every stored trial replays to the identical record and cell digest
    let report = Report::from_json(&ra).map_err(|e| e.to_string())?;
    let mut replayed = 0;
    for cell in all_cells(&report.meta.config) {
        let stream = cell.stream();
        let (_, stored) = report.find_cell(&stream).ok_or_else(|| format!("{stream} missing"))?;
        let mut ids: Vec<String> = stored.exemplar.iter().chain(&stored.witnesses).map(|e| e.id.clone()).collect();
        if cell.check != Check::Nonvanishing {
            ids.push(cell.trial_id(cell.trials - 1));
        }
        for id in ids {
            let r = replay(&report, &id, None).map_err(|e| e.to_string())?;
            ensure(r.reproduced(), || format!("{id} not reproduced"))?;
            replayed += 1;
        }
    }

    // the command-line path, with the trace of an upperbound-ii trial
    let id = "upperbound-ii/fp:5/lambda=2,1,1#3";
    let out = run_bin(&["replay", "--report", a.to_str().unwrap(), "--id", id]);
    let text = String::from_utf8_lossy(&out.stdout);
    ensure(out.status.code() == Some(0), || format!("replay exit {:?}: {text}", out.status.code()))?;
    for i in 1..4 {
        let d = d_value(&"2,1,1".parse().unwrap(), i).unwrap();
        let line = text.lines().find(|l| l.starts_with(&format!("i={i} ")));
        ensure(line.is_some_and(|l| l.contains(&format!("d={d}")) && l.contains("stable_rank=")), || {
            format!("trace for i={i} missing: {text}")
        })?;
    }

    // an altered seed no longer reproduces
    let exemplar = "vanishing/rational/lambda=2,2#0";
    let out = run_bin(&["replay", "--report", a.to_str().unwrap(), "--id", exemplar, "--seed", "2025"]);
    ensure(out.status.code() == Some(1), || format!("altered seed exit {:?}", out.status.code()))?;

    // an injected violation is reported and replays identically
    let injected = "upperbound-i/fp:3/lambda=3,1;i=2#4";
    let rc = verify_to(&c, &["--inject", injected])?;
    let rep_c = Report::from_json(&rc).map_err(|e| e.to_string())?;
    ensure(rep_c.verdict == Verdict::Violation, || "injection not reported".into())?;
    let stored = rep_c.find_record(injected).ok_or("injected record not stored")?;
    let out = run_bin(&["replay", "--report", c.to_str().unwrap(), "--id", injected]);
    ensure(out.status.code() == Some(0), || "injected replay differs".into())?;
    let r = replay(&rep_c, injected, None).map_err(|e| e.to_string())?;
    ensure(&r.record == stored && r.record.matrices == stored.matrices, || "injected matrices differ".into())?;

    // a report from another version is refused
    let stale = ra.replacen(&format!("\"version\": \"{}\"", env!("CARGO_PKG_VERSION")), "\"version\": \"0.0.0\"", 1);
    let stale_path = dir.join("stale.json");
    std::fs::write(&stale_path, stale).map_err(|e| e.to_string())?;
    let out = run_bin(&["replay", "--report", stale_path.to_str().unwrap(), "--id", exemplar]);
    ensure(out.status.code() == Some(2), || format!("stale exit {:?}", out.status.code()))?;

    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("identical reports, {replayed} trials replayed"))
}

struct Criterion {
    number: u32,
    title: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { number: 1, title: "worked example", limit: secs(1), run: c1_worked_example },
        Criterion { number: 2, title: "d-consistency", limit: secs(10), run: c2_d_consistency },
        Criterion { number: 3, title: "regular nilpotent witness", limit: secs(30), run: c3_rank_witness },
        Criterion { number: 4, title: "existence witness", limit: secs(120), run: c4_existence_witness },
        Criterion { number: 5, title: "leading-block stable rank bound", limit: secs(300), run: c5_upperbound_ii },
        Criterion { number: 6, title: "invariant subspace bound", limit: secs(300), run: c6_upperbound_i },
        Criterion { number: 7, title: "vanishing on smaller orbits", limit: secs(300), run: c7_vanishing },
        Criterion { number: 8, title: "generic nonvanishing and top degree", limit: secs(120), run: c8_nonvanishing },
        Criterion { number: 9, title: "symbolic top component", limit: secs(300), run: c9_symbolic },
        Criterion { number: 10, title: "monomial degree bound", limit: secs(120), run: c10_monomial_bound },
        Criterion { number: 11, title: "regular-orbit reduction", limit: secs(60), run: c11_mvdk },
        Criterion { number: 12, title: "oracle equivalences", limit: secs(120), run: c12_oracles },
        Criterion { number: 13, title: "reproducibility", limit: secs(120), run: c13_reproducibility },
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for c in &criteria {
        if !filter.is_empty() && !filter.contains(&c.number) {
            continue;
        }
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > c.limit => Err(format!("{detail}; over the {:?} limit", c.limit)),
            other => other,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!(
            "[{tag}] criterion {:>2} {:<38} {:>8.2}s / {:>4}s  {detail}",
            c.number,
            c.title,
            elapsed.as_secs_f64(),
            c.limit.as_secs()
        );
        failed += outcome.is_err() as u32;
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
