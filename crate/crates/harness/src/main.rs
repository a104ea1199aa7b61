//! `nilorbit`: inspect parabolic shapes, run verification campaigns, find
//! nonvanishing witnesses and replay recorded trials.
//!
//! Exit status: 0 all checks passed, 1 a violation was found, 2 usage or
//! configuration error, 3 passed with inconclusive entries.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use nilorbit::combinatorics::{dimensions, richardson_partition};
use nilorbit::constructions::DEFAULT_SAMPLE_BOUND;
use nilorbit::splitting::{degree_profile, f_lambda, find_nonvanishing_witness, DEFAULT_MAX_TRIALS};
use nilorbit::{Composition, DVector, Error, Field, FieldSpec, Partition, PrimeField, Rationals, TrialRng};
use nilorbit_harness::config::parse_list;
use nilorbit_harness::replay::{render, replay};
use nilorbit_harness::{run_campaign, Check, ConfigFile, Format, HarnessError, Report};
use serde_json::json;

#[derive(Parser)]
#[command(name = "nilorbit", version, about = "Exact checks on nilpotent orbits and their splitting functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum InfoFormat {
    #[default]
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Richardson partition, d-vector and dimensions for a composition.
    Info {
        #[arg(long)]
        nu: Composition,
        #[arg(long, value_enum, default_value_t)]
        format: InfoFormat,
    },
    /// Run a verification campaign and write its report.
    Verify(VerifyArgs),
    /// Search for an orbit element on which f_lambda does not vanish.
    Witness {
        #[arg(long)]
        lambda: Partition,
        #[arg(long, default_value = "rational")]
        field: FieldSpec,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_TRIALS)]
        max_trials: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLE_BOUND)]
        bound: i64,
    },
    /// Rerun one trial of a report and print its intermediate values.
    Replay {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        id: String,
        /// Replay under a different campaign seed.
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// JSON file with any of the campaign keys; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated check names, or "all".
    #[arg(long)]
    targets: Option<String>,
    #[arg(long)]
    n_max: Option<usize>,
    /// Comma-separated fields: rational, fp:<prime>.
    #[arg(long)]
    fields: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Entry bound for random conjugators over the rationals.
    #[arg(long)]
    bound: Option<i64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
    /// Worker threads; 1 runs serially. Does not affect the report.
    #[arg(long)]
    threads: Option<usize>,
    /// Force the outcome of a trial id to a violation.
    #[arg(long)]
    inject: Vec<String>,
}

fn config_error(e: impl std::fmt::Display) -> anyhow::Error {
    HarnessError::Config(e.to_string()).into()
}

fn info(nu: &Composition, format: InfoFormat) {
    let lambda = richardson_partition(nu);
    let d = DVector::from_partition(&lambda);
    let (dim_u, dim_orbit) = dimensions(nu);
    match format {
        InfoFormat::Text => {
            println!("nu          ({nu})");
            println!("lambda      ({lambda})");
            println!("d           ({d})");
            println!("dim u_P     {dim_u}");
            println!("dim orbit   {dim_orbit}");
        }
        InfoFormat::Json => {
            let v = json!({
                "nu": nu.parts(),
                "lambda": lambda.parts(),
                "d_vector": d.values(),
                "dim_u": dim_u,
                "dim_orbit": dim_orbit,
            });
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        }
    }
}

fn verify(args: VerifyArgs) -> Result<i32> {
    let file = match &args.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let targets = match args.targets.as_deref() {
        None => None,
        Some("all") => Some(Check::ALL.to_vec()),
        Some(s) => Some(parse_list::<Check>(s)?),
    };
    let fields = args
        .fields
        .as_deref()
        .map(parse_list::<FieldSpec>)
        .transpose()
        .map_err(config_error)?;
    let format = args.format.as_deref().map(str::parse::<Format>).transpose()?;
    let cli = ConfigFile {
        targets,
        n_max: args.n_max,
        fields,
        trials: args.trials,
        seed: args.seed,
        bound: args.bound,
        inject: (!args.inject.is_empty()).then_some(args.inject),
        out: args.out,
        format,
    };
    let (cfg, out, format) = file.merge(cli).resolve()?;

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = args.threads {
        pool = pool.num_threads(t.max(1));
    }
    let pool = pool.build().context("building thread pool")?;
    let report = pool.install(|| run_campaign(&cfg));

    for c in &report.checks {
        eprintln!(
            "{:<20} {:<12} cells={:<4} trials={:<7} violations={} inconclusive={}{}",
            c.check.to_string(),
            format!("{:?}", c.status).to_lowercase(),
            c.cells.len(),
            c.counts.trials,
            c.counts.violation,
            c.counts.inconclusive,
            if c.guard_trips.is_empty() { String::new() } else { format!(" guard_trips={}", c.guard_trips.len()) },
        );
    }
    eprintln!("verdict: {:?}", report.verdict);

    let text = match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    match out {
        Some(path) => std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(report.verdict.exit_code())
}

fn witness<F: Field>(field: &F, lambda: &Partition, seed: u64, max_trials: u64, bound: i64) -> Result<i32> {
    let stream_name = format!("witness/{}/lambda={lambda}", field.spec());
    let stream = |k| TrialRng::derive(seed, &stream_name, k);
    match find_nonvanishing_witness(lambda, field, stream, max_trials, bound) {
        Ok((k, sample)) => {
            let value = f_lambda(lambda, &sample.matrix)?;
            let profile = degree_profile(&sample.matrix)?;
            println!("trial       {k}");
            println!("stream      {}", sample.seed);
            println!("conjugator\n{}", sample.conjugator.pretty());
            println!("matrix\n{}", sample.matrix.pretty());
            let factors: Vec<String> = value.factors.iter().map(|v| v.to_string()).collect();
            println!("factors     [{}]", factors.join(","));
            println!("f_lambda    {}", value.product);
            let degrees: Vec<String> = profile.degrees.iter().map(|v| v.to_string()).collect();
            println!("profile     [{}]", degrees.join(","));
            println!("d           [{}]", DVector::from_partition(lambda));
            Ok(0)
        }
        Err(Error::Exhausted(n)) => {
            println!("f_lambda vanished on all {n} samples");
            // only over the rationals does exhaustion contradict generic nonvanishing
            Ok(if field.characteristic() == 0 { 1 } else { 3 })
        }
        Err(e) => Err(e.into()),
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Info { nu, format } => {
            info(&nu, format);
            Ok(0)
        }
        Command::Verify(args) => verify(args),
        Command::Witness { lambda, field, seed, max_trials, bound } => match field {
            FieldSpec::Rational => witness(&Rationals, &lambda, seed, max_trials, bound),
            FieldSpec::Prime(p) => witness(&PrimeField::new(p)?, &lambda, seed, max_trials, bound),
        },
        Command::Replay { report, id, seed } => {
            let text = std::fs::read_to_string(&report)
                .with_context(|| format!("reading {}", report.display()))
                .map_err(config_error)?;
            let parsed = Report::from_json(&text).map_err(config_error)?;
            let result = replay(&parsed, &id, seed)?;
            print!("{}", render(&result));
            Ok(if result.reproduced() { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = e.downcast_ref::<HarnessError>().is_some() || e.downcast_ref::<Error>().is_some();
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}
