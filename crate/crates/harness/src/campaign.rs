//! Campaign execution.
//!
//! A check expands into cells (one per field and parameter, such as a
//! partition or a size), and a cell into numbered trials. Trial `t` of a cell
//! draws from `TrialRng::derive(seed, stream, t)` and nothing else, so trials
//! run in any order, on any number of threads, with identical results.

use std::time::{Instant, SystemTime, UNIX_EPOCH};

use nilorbit::combinatorics::{
    d_value, dimensions, dominance_leq, invariant_dim_bound, richardson_partition,
    strictly_dominated,
};
use nilorbit::constructions::{
    existence_witness, has_jordan_type, jordan_matrix, max_invariant_subspace_with_steps,
    random_invertible, random_matrix, random_orbit_element, regular_nilpotent_witness, Subspace,
};
use nilorbit::splitting::{degree_profile, f_lambda, find_nonvanishing_witness, leading_minor_product};
use nilorbit::symbolic::{
    max_monomial_degree, random_point, verify_top_component, MONOMIAL_CHECK_MAX_N,
    TOP_COMPONENT_MAX_N,
};
use nilorbit::{
    Composition, DVector, Error, Field, FieldSpec, Matrix, ParabolicShape, Partition, PrimeField,
    Rationals, TrialRng,
};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::config::{CampaignConfig, Check, FieldUse};
use crate::report::{
    CellReport, CheckReport, Counts, GuardTrip, Meta, Report, Status, Timing, TrialRecord, Verdict,
    MAX_RECORDED,
};

/// Suffix of the id of a cell's aggregate record.
pub const SUMMARY: &str = "summary";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Param {
    Lambda(Partition),
    LambdaIndex(Partition, usize),
    Nu(Composition),
    Size(usize),
    /// Nilpotency index of the regular witness.
    Index(usize),
    /// All dominance pairs of partitions of `n`.
    Pairs(usize),
}

impl Param {
    pub fn key(&self) -> String {
        match self {
            Param::Lambda(l) => format!("lambda={l}"),
            Param::LambdaIndex(l, i) => format!("lambda={l};i={i}"),
            Param::Nu(nu) => format!("nu={nu}"),
            Param::Size(n) => format!("n={n}"),
            Param::Index(i) => format!("i={i}"),
            Param::Pairs(n) => format!("pairs;n={n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub check: Check,
    pub field: Option<FieldSpec>,
    pub param: Param,
    pub trials: u64,
}

impl Cell {
    pub fn stream(&self) -> String {
        let field = self.field.map_or_else(|| "-".to_string(), |f| f.to_string());
        format!("{}/{}/{}", self.check, field, self.param.key())
    }

    pub fn trial_id(&self, t: u64) -> String {
        format!("{}#{t}", self.stream())
    }

    fn rng(&self, seed: u64, t: u64) -> TrialRng {
        TrialRng::derive(seed, &self.stream(), t)
    }

    /// Whether the cell produces an aggregate record besides its trials.
    fn has_summary(&self) -> bool {
        matches!(self.check, Check::TopComponent | Check::DConsistency)
    }
}

/// Splits `"stream#suffix"`.
pub fn split_id(id: &str) -> Option<(&str, &str)> {
    id.rsplit_once('#')
}

/// The cells of one check, plus sizes skipped by a resource guard and notes.
pub fn plan(cfg: &CampaignConfig, check: Check) -> (Vec<Cell>, Vec<GuardTrip>, Vec<String>) {
    let n_max = cfg.n_max_for(check);
    let trials = cfg.trials_for(check).unwrap_or(1);
    let mut notes = Vec::new();
    let fields: Vec<Option<FieldSpec>> = match check.field_use() {
        FieldUse::None => vec![None],
        FieldUse::All => cfg.fields.iter().copied().map(Some).collect(),
        FieldUse::RationalOnly => {
            if cfg.fields.contains(&FieldSpec::Rational) {
                vec![Some(FieldSpec::Rational)]
            } else {
                notes.push("runs over the rationals only, which are not among the configured fields".into());
                vec![]
            }
        }
    };
    let guard = match check {
        Check::TopComponent => Some(TOP_COMPONENT_MAX_N),
        Check::MonomialBound => Some(MONOMIAL_CHECK_MAX_N),
        _ => None,
    };
    let top = guard.map_or(n_max, |g| n_max.min(g));
    let trips = (top + 1..=n_max)
        .map(|n| GuardTrip { n, reason: format!("{check} is limited to n <= {top}") })
        .collect();

    let mut cells = Vec::new();
    let mut push = |field: Option<FieldSpec>, param: Param, trials: u64| {
        cells.push(Cell { check, field, param, trials })
    };
    if check == Check::Vanishing {
        for n in 2..=n_max {
            push(None, Param::Pairs(n), 1);
        }
    }
    for &field in &fields {
        match check {
            Check::UpperboundI => {
                for n in 2..=n_max {
                    for l in Partition::all(n) {
                        for i in 1..n {
                            // trial 0 uses the coordinate subspace
                            push(field, Param::LambdaIndex(l.clone(), i), trials + 1);
                        }
                    }
                }
            }
            Check::UpperboundIi | Check::Nonvanishing => {
                for n in 2..=n_max {
                    for l in Partition::all(n) {
                        push(field, Param::Lambda(l), trials);
                    }
                }
            }
            Check::Vanishing => {
                for n in 2..=n_max {
                    for mu in Partition::all(n) {
                        if mu != Partition::row(n) {
                            push(field, Param::Lambda(mu), trials);
                        }
                    }
                }
            }
            Check::RankWitness => {
                for i in 2..=n_max {
                    push(field, Param::Index(i), i as u64 - 1);
                }
            }
            Check::ExistenceWitness => {
                for n in 2..=n_max {
                    for l in Partition::all(n) {
                        push(field, Param::Lambda(l), n as u64 - 1);
                    }
                }
            }
            Check::TopComponent => {
                for n in 2..=top {
                    for nu in Composition::all(n) {
                        push(field, Param::Nu(nu), trials);
                    }
                }
            }
            Check::MonomialBound => {
                for n in 2..=top {
                    for nu in Composition::all(n) {
                        push(field, Param::Nu(nu), n as u64 - 1);
                    }
                }
            }
            Check::DConsistency => {
                for n in 1..=n_max {
                    push(field, Param::Size(n), Composition::all(n).len() as u64);
                }
            }
            Check::MvdkReduction => {
                for n in 2..=n_max {
                    push(field, Param::Size(n), trials);
                }
            }
            Check::OracleEquivalence => {
                for n in 1..=n_max {
                    push(field, Param::Size(n), trials);
                }
            }
        }
    }
    (cells, trips, notes)
}

/// Every cell of every configured check.
pub fn all_cells(cfg: &CampaignConfig) -> Vec<Cell> {
    cfg.targets.iter().flat_map(|&c| plan(cfg, c).0).collect()
}

/// Runs trial `t` of `cell`.
pub fn run_trial(cfg: &CampaignConfig, cell: &Cell, t: u64) -> TrialRecord {
    let mut rec = TrialRecord::new(cell.trial_id(t));
    let result = match cell.field {
        None | Some(FieldSpec::Rational) => evaluate(&Rationals, cfg, cell, t, &mut rec),
        Some(FieldSpec::Prime(p)) => {
            let f = PrimeField::new(p).expect("validated modulus");
            evaluate(&f, cfg, cell, t, &mut rec)
        }
    };
    if let Err(e) = result {
        rec.fail(format!("error: {e}"));
    }
    if cfg.inject.contains(&rec.id) {
        rec.fail("injected violation");
    }
    rec
}

fn factor_list<F: Field>(values: &[F::Elem]) -> String {
    let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn list(values: &[usize]) -> String {
    let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("[{}]", parts.join(","))
}

/// Rows are basis vectors.
fn subspace_rows<F: Field>(s: &Subspace<F>) -> String {
    s.basis_matrix().transpose().to_string()
}

fn evaluate<F: Field>(
    f: &F,
    cfg: &CampaignConfig,
    cell: &Cell,
    t: u64,
    rec: &mut TrialRecord,
) -> nilorbit::Result<()> {
    let mut rng = cell.rng(cfg.seed, t);
    let bound = cfg.bound;
    match (&cell.check, &cell.param) {
        (Check::UpperboundI, Param::LambdaIndex(lambda, i)) => {
            let (n, i) = (lambda.n(), *i);
            rec.stream = Some(rng.seed_hex());
            let s = random_orbit_element(f, lambda, &mut rng, bound)?;
            let w = if t == 0 {
                Subspace::coordinate(f, n, i)
            } else {
                Subspace::random(f, n, i, &mut rng, bound)
            };
            let (u, steps) = max_invariant_subspace_with_steps(&s.matrix, &w)?;
            let need = invariant_dim_bound(lambda, i);
            rec.matrix("conjugator", &s.conjugator);
            rec.matrix("x", &s.matrix);
            rec.matrix("w", subspace_rows(&w));
            rec.matrix("u", subspace_rows(&u));
            rec.note("w", if t == 0 { "coordinate" } else { "random" });
            rec.note("dim_u", u.dim());
            rec.note("bound", need);
            rec.note("steps", steps);
            if u.dim() < need {
                rec.fail(format!("invariant subspace of dimension {} < {need}", u.dim()));
            }
            if steps > n {
                rec.fail(format!("{steps} shrinking steps for n = {n}"));
            }
            if !(u.is_within(&w) && u.is_invariant(&s.matrix)) {
                rec.fail("result is not an invariant subspace of W");
            }
        }
        (Check::UpperboundIi, Param::Lambda(lambda)) => {
            rec.stream = Some(rng.seed_hex());
            let s = random_orbit_element(f, lambda, &mut rng, bound)?;
            rec.matrix("conjugator", &s.conjugator);
            rec.matrix("x", &s.matrix);
            for i in 1..lambda.n() {
                let r = s.matrix.leading_submatrix(i)?.stable_rank()?;
                let d = d_value(lambda, i)?;
                rec.note(format!("i={i}"), format!("stable_rank={r} d={d}"));
                if r > d {
                    rec.fail(format!("stable rank {r} > d = {d} at i = {i}"));
                }
            }
        }
        (Check::RankWitness, Param::Index(i)) => {
            let (i, h) = (*i, t as usize + 1);
            let x = regular_nilpotent_witness(f, i, h)?;
            let nilpotent = x.pow(i as u32)?.is_zero();
            let top_rank = x.pow(i as u32 - 1)?.rank();
            let det = x.leading_submatrix(h)?.determinant()?;
            rec.matrix("x", &x);
            rec.note("h", h);
            rec.note("x^i = 0", nilpotent);
            rec.note("rank x^(i-1)", top_rank);
            rec.note("det x_h", &det);
            if !nilpotent || top_rank != 1 {
                rec.fail("not regular nilpotent");
            }
            if f.is_zero(&det) {
                rec.fail(format!("leading {h}x{h} block is singular"));
            }
        }
        (Check::ExistenceWitness, Param::Lambda(lambda)) => {
            let i = t as usize + 1;
            let x = existence_witness(f, lambda, i)?;
            let r = x.leading_submatrix(i)?.stable_rank()?;
            let d = d_value(lambda, i)?;
            rec.matrix("x", &x);
            rec.note("i", i);
            rec.note("stable_rank", r);
            rec.note("d", d);
            if !has_jordan_type(&x, lambda) {
                rec.fail(format!("Jordan type is not {lambda}"));
            }
            if r != d {
                rec.fail(format!("stable rank {r} != d = {d}"));
            }
        }
        (Check::Vanishing, Param::Pairs(n)) => {
            let mut pairs = 0;
            for lambda in Partition::all(*n) {
                let dl = DVector::from_partition(&lambda);
                for mu in strictly_dominated(&lambda) {
                    pairs += 1;
                    let dm = DVector::from_partition(&mu);
                    if !(1..*n).any(|i| dm.get(i) < dl.get(i)) {
                        rec.fail(format!("no i with d_mu < d_lambda for mu={mu}, lambda={lambda}"));
                    }
                }
            }
            rec.note("pairs", pairs);
        }
        (Check::Vanishing, Param::Lambda(mu)) => {
            rec.stream = Some(rng.seed_hex());
            let s = random_orbit_element(f, mu, &mut rng, bound)?;
            rec.matrix("conjugator", &s.conjugator);
            rec.matrix("x", &s.matrix);
            for lambda in Partition::all(mu.n()) {
                if lambda == *mu || !dominance_leq(mu, &lambda)? {
                    continue;
                }
                let v = f_lambda(&lambda, &s.matrix)?;
                let first = v.first_zero_factor(f).map_or("none".to_string(), |k| k.to_string());
                rec.note(
                    format!("lambda={lambda}"),
                    format!("factors={} first_zero={first}", factor_list::<F>(&v.factors)),
                );
                if !f.is_zero(&v.product) {
                    rec.fail(format!("f_lambda nonzero for lambda={lambda} on the orbit of {mu}"));
                }
            }
        }
        (Check::Nonvanishing, Param::Lambda(lambda)) => {
            rec.stream = Some(rng.seed_hex());
            let s = random_orbit_element(f, lambda, &mut rng, bound)?;
            let v = f_lambda(lambda, &s.matrix)?;
            let profile = degree_profile(&s.matrix)?;
            let d = DVector::from_partition(lambda);
            let nonzero = !f.is_zero(&v.product);
            rec.matrix("conjugator", &s.conjugator);
            rec.matrix("x", &s.matrix);
            rec.note("factors", factor_list::<F>(&v.factors));
            rec.note("nonvanishing", nonzero);
            rec.note("profile", list(&profile.degrees));
            rec.note("d", list(d.values()));
            if !profile.bounded_by(&d) {
                rec.fail("degree profile exceeds the d-vector");
            }
            if nonzero && profile.degrees != d.values() {
                rec.fail("nonvanishing sample whose profile differs from the d-vector");
            }
        }
        (Check::TopComponent, Param::Nu(nu)) => {
            rec.stream = Some(rng.seed_hex());
            let g = random_invertible(&Rationals, nu.n(), &mut rng, bound);
            let check = verify_top_component(nu, &g)?;
            let r = &check.record;
            rec.matrix("conjugator", &g);
            rec.note("degree", r.degree);
            rec.note("expected_degree", r.expected_degree);
            rec.note("factor_degrees", list(&r.factor_degrees));
            rec.note("d", list(&r.d_vector));
            rec.note("attained", r.attained);
            rec.note("top_component_matches", r.top_component_matches);
            rec.note("degenerate", r.degenerate);
            if !r.consistent() {
                rec.fail("top-component identity or degree bound broken");
            }
            let mut agree = 0;
            for _ in 0..SPECIALIZATION_POINTS {
                let point = random_point(check.conjugated.nvars(), &mut rng, bound);
                let (sym, num) = check.specialize(&g, &point)?;
                if sym == num {
                    agree += 1;
                } else {
                    let coords: Vec<String> = point.iter().map(|c| c.to_string()).collect();
                    rec.fail(format!("specialization at [{}]: {sym} != {num}", coords.join(",")));
                }
            }
            rec.note("specializations_agree", format!("{agree}/{SPECIALIZATION_POINTS}"));
        }
        (Check::MonomialBound, Param::Nu(nu)) => {
            let s = t as usize + 1;
            let max = max_monomial_degree(nu, s)?;
            let d = DVector::from_partition(&richardson_partition(nu)).get(s);
            rec.note("s", s);
            rec.note("max_degree", max.map_or("none".to_string(), |m| m.to_string()));
            rec.note("d", d);
            if max.is_some_and(|m| m > d) {
                rec.fail(format!("monomial of degree {} > d = {d}", max.unwrap_or_default()));
            }
        }
        (Check::DConsistency, Param::Size(n)) => {
            let nu = &Composition::all(*n)[t as usize];
            let counts = ParabolicShape::new(nu).codiagonal_counts();
            let formula = DVector::from_partition(&richardson_partition(nu));
            let squares: usize = nu.parts().iter().map(|p| p * p).sum();
            let (dim_u, dim_orbit) = dimensions(nu);
            rec.note("nu", nu);
            rec.note("shape_counts", &counts);
            rec.note("formula", &formula);
            if counts != formula {
                rec.fail("codiagonal counts differ from the formula");
            }
            if formula.sum() != (n * n - squares) / 2 || dim_u != formula.sum() || dim_orbit != 2 * dim_u {
                rec.fail("d-vector sum is not dim u_P");
            }
        }
        (Check::MvdkReduction, Param::Size(n)) => {
            rec.stream = Some(rng.seed_hex());
            let x = random_matrix(f, *n, &mut rng, bound);
            let lhs = f_lambda(&Partition::row(*n), &x)?.product;
            let rhs = leading_minor_product(&x)?;
            rec.matrix("x", &x);
            rec.note("f_lambda", &lhs);
            rec.note("leading_minor_product", &rhs);
            if lhs != rhs {
                rec.fail("f_(n) differs from the leading-minor product");
            }
        }
        (Check::OracleEquivalence, Param::Size(n)) => {
            rec.stream = Some(rng.seed_hex());
            let m = mixed_matrix(f, *n, &mut rng, bound);
            let by_power = m.pow(*n as u32)?.rank();
            let sums = m.principal_minor_sums()?;
            let by_minors = (0..=*n).rev().find(|&j| !f.is_zero(&sums[j])).unwrap_or(0);
            let brute = exhaustive_minor_sums(&m)?;
            rec.matrix("m", &m);
            rec.note("stable_rank_power", by_power);
            rec.note("stable_rank_minors", by_minors);
            rec.note("minor_sums", factor_list::<F>(&sums));
            if by_power != by_minors {
                rec.fail(format!("stable rank {by_power} by powers, {by_minors} by minors"));
            }
            if sums != brute {
                rec.fail(format!("minor sums differ from exhaustive {}", factor_list::<F>(&brute)));
            }
        }
        (check, param) => {
            return Err(Error::DimensionMismatch(format!("{check} has no cell {param:?}")));
        }
    }
    Ok(())
}

/// Rational points per conjugator at which the symbolic product is compared
/// with its numeric value.
pub const SPECIALIZATION_POINTS: usize = 20;

/// Dense, low-rank, or a conjugated invertible-plus-nilpotent block matrix, so
/// that stable ranks spread over `0..=n`.
fn mixed_matrix<F: Field>(f: &F, n: usize, rng: &mut TrialRng, bound: i64) -> Matrix<F> {
    match rng.below(3) {
        0 => random_matrix(f, n, rng, bound),
        1 => {
            let r = rng.below(n as u64 + 1) as usize;
            let a = Matrix::from_fn(f, n, r, |_, _| f.sample(rng, bound));
            let b = Matrix::from_fn(f, r, n, |_, _| f.sample(rng, bound));
            a.mul(&b).expect("conformable")
        }
        _ => {
            let k = rng.below(n as u64 + 1) as usize;
            let unit = random_invertible(f, k, rng, bound);
            let parts = Partition::all(n - k);
            let nil = if n > k {
                jordan_matrix(f, &parts[rng.below(parts.len() as u64) as usize])
            } else {
                Matrix::zeros(f, 0, 0)
            };
            let g = random_invertible(f, n, rng, bound);
            let block = Matrix::block_diagonal(f, &[unit, nil]);
            let g_inv = g.inverse().expect("invertible by construction");
            g.mul(&block).and_then(|m| m.mul(&g_inv)).expect("conformable")
        }
    }
}

/// `s_j` as the sum of determinants of every principal `j×j` submatrix.
fn exhaustive_minor_sums<F: Field>(m: &Matrix<F>) -> nilorbit::Result<Vec<F::Elem>> {
    let f = m.field();
    let n = m.rows();
    let mut sums = vec![f.zero(); n + 1];
    for mask in 0u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|&k| mask >> k & 1 == 1).collect();
        let det = m.select(&idx, &idx).determinant()?;
        sums[idx.len()] = f.add(&sums[idx.len()], &det);
    }
    Ok(sums)
}

/// The aggregate record of a cell, for cells that have one.
fn summarize(cfg: &CampaignConfig, cell: &Cell, records: &[TrialRecord]) -> Option<TrialRecord> {
    if !cell.has_summary() {
        return None;
    }
    let mut rec = TrialRecord::new(format!("{}#{SUMMARY}", cell.stream()));
    match (&cell.check, &cell.param) {
        (Check::TopComponent, _) => {
            let attained = records.iter().filter(|r| trace_value(r, "attained") == Some("true")).count();
            rec.note("attained", format!("{attained}/{}", records.len()));
            if attained == 0 {
                rec.fail("no sampled conjugator reached degree dim u_P");
            }
        }
        (Check::DConsistency, Param::Size(n)) => {
            let mut seen = std::collections::HashMap::new();
            for lambda in Partition::all(*n) {
                let d = DVector::from_partition(&lambda);
                if let Some(prev) = seen.insert(d.clone(), lambda.clone()) {
                    rec.fail(format!("{prev} and {lambda} share the d-vector {d}"));
                }
            }
            rec.note("partitions", seen.len());
        }
        _ => {}
    }
    if cfg.inject.contains(&rec.id) {
        rec.fail("injected violation");
    }
    Some(rec)
}

fn trace_value<'a>(rec: &'a TrialRecord, label: &str) -> Option<&'a str> {
    rec.trace.iter().find(|(k, _)| k == label).map(|(_, v)| v.as_str())
}

/// SHA-256 over the JSON form of each record, one per line.
pub fn digest(records: &[TrialRecord]) -> String {
    let mut h = Sha256::new();
    for r in records {
        h.update(serde_json::to_string(r).expect("record serializes").as_bytes());
        h.update(b"\n");
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// The winning or exhausted search of a nonvanishing cell, as one record.
fn nonvanishing_record(cfg: &CampaignConfig, cell: &Cell, lambda: &Partition) -> TrialRecord {
    let stream = cell.stream();
    let search = |k| TrialRng::derive(cfg.seed, &stream, k);
    let found = match cell.field {
        None | Some(FieldSpec::Rational) => {
            find_nonvanishing_witness(lambda, &Rationals, search, cell.trials, cfg.bound).map(|(k, _)| k)
        }
        Some(FieldSpec::Prime(p)) => {
            let f = PrimeField::new(p).expect("validated modulus");
            find_nonvanishing_witness(lambda, &f, search, cell.trials, cfg.bound).map(|(k, _)| k)
        }
    };
    match found {
        Ok(k) => run_trial(cfg, cell, k),
        Err(Error::Exhausted(tries)) => {
            let mut rec = TrialRecord::new(format!("{stream}#{SUMMARY}"));
            rec.note("attempts", tries);
            let message = format!("f_lambda vanished on all {tries} samples");
            if cell.field == Some(FieldSpec::Rational) {
                rec.fail(message);
            } else {
                rec.inconclusive(message);
            }
            if cfg.inject.contains(&rec.id) {
                rec.fail("injected violation");
            }
            rec
        }
        Err(e) => {
            let mut rec = TrialRecord::new(format!("{stream}#{SUMMARY}"));
            rec.fail(format!("error: {e}"));
            rec
        }
    }
}

/// All records a cell produces, in order: trials, then any summary.
pub fn cell_records(cfg: &CampaignConfig, cell: &Cell) -> Vec<TrialRecord> {
    if let (Check::Nonvanishing, Param::Lambda(lambda)) = (&cell.check, &cell.param) {
        return vec![nonvanishing_record(cfg, cell, lambda)];
    }
    let mut records: Vec<TrialRecord> =
        (0..cell.trials).into_par_iter().map(|t| run_trial(cfg, cell, t)).collect();
    if let Some(s) = summarize(cfg, cell, &records) {
        records.push(s);
    }
    records
}

pub fn run_cell(cfg: &CampaignConfig, cell: &Cell) -> CellReport {
    let records = cell_records(cfg, cell);
    let mut counts = Counts::default();
    let mut violations = Vec::new();
    let mut inconclusive = Vec::new();
    for r in &records {
        counts.record(r.status);
        let bucket = match r.status {
            Status::Violation => &mut violations,
            Status::Inconclusive => &mut inconclusive,
            Status::Pass => continue,
        };
        if bucket.len() < MAX_RECORDED {
            bucket.push(r.clone());
        }
    }
    let witnesses = if cell.check == Check::Nonvanishing {
        records.iter().filter(|r| r.status == Status::Pass).cloned().collect()
    } else {
        Vec::new()
    };
    CellReport {
        key: cell.param.key(),
        field: cell.field,
        stream: cell.stream(),
        counts,
        digest: digest(&records),
        exemplar: records.first().cloned(),
        violations,
        inconclusive,
        witnesses,
    }
}

pub fn run_check(cfg: &CampaignConfig, check: Check) -> CheckReport {
    let (cells, guard_trips, notes) = plan(cfg, check);
    let cells: Vec<CellReport> = cells.par_iter().map(|c| run_cell(cfg, c)).collect();
    let mut counts = Counts::default();
    for c in &cells {
        counts.absorb(&c.counts);
    }
    CheckReport {
        check,
        n_max: cfg.n_max_for(check),
        trials: cfg.trials_for(check),
        status: counts.status(),
        counts,
        cells,
        guard_trips,
        notes,
    }
}

/// Runs every target check on the current rayon pool.
pub fn run_campaign(cfg: &CampaignConfig) -> Report {
    let started = Instant::now();
    let started_unix = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let mut timing = Timing { started_unix, ..Default::default() };
    let mut checks = Vec::new();
    let mut counts = Counts::default();
    for &check in &cfg.targets {
        let t0 = Instant::now();
        let report = run_check(cfg, check);
        timing.per_check.insert(check.to_string(), t0.elapsed().as_secs_f64());
        counts.absorb(&report.counts);
        checks.push(report);
    }
    timing.wall_seconds = started.elapsed().as_secs_f64();
    let verdict = match counts.status() {
        Status::Pass => Verdict::Pass,
        Status::Inconclusive => Verdict::Inconclusive,
        Status::Violation => Verdict::Violation,
    };
    Report { meta: Meta::current(cfg.clone()), verdict, counts, checks, timing }
}
