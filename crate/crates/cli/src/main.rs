use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use azumaya_core::algebra::AlgebraSpec;
use azumaya_core::pi::DEFAULT_MAX_TUPLES;
use azumaya_core::suites::{self, SuiteOptions, DEFAULT_MAX_ELEMENTS};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

mod config;
mod runner;

use config::{CheckSpec, Objects, RunConfig};
use runner::{Settings, Timed};

#[derive(Parser)]
#[command(name = "azumaya", version, about = "Checks for Azumaya algebras over finite commutative rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Root seed; required whenever anything is sampled.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Newline-delimited JSON reports on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Largest exhaustive tuple sweep before switching to sampling.
    #[arg(long, global = true)]
    max_tuples: Option<u64>,
    /// Largest algebra enumerated element by element.
    #[arg(long, global = true)]
    max_elements: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the config and echo canonical forms of its objects.
    Construct,
    /// Run every check in the config, in order.
    Run,
    /// Run the config's checks with this name.
    Check { name: String },
    /// Run a built-in suite, or `theorem41` / `all`.
    Suite { name: String },
    /// Randomized searches declared in the config.
    Search { what: SearchKind },
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchKind {
    Counterexample,
}

/// Exit code 2: the input was rejected before or while checking.
struct Invalid(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Invalid {
    fn from(e: E) -> Self {
        Invalid(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match dispatch(&cli) {
        Ok(Outcome::Reports(reports)) => {
            let code = runner::exit_code(&reports);
            let mut out = io::stdout().lock();
            if runner::emit(&mut out, &reports, cli.json).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(2);
            }
            eprintln!("{}", runner::summary(&reports, code, start.elapsed().as_millis()));
            ExitCode::from(code as u8)
        }
        Ok(Outcome::Constructed(lines)) => {
            let mut out = io::stdout().lock();
            for l in lines {
                let text = if cli.json { l.to_string() } else { serde_json::to_string_pretty(&l).unwrap_or_default() };
                if writeln!(out, "{text}").is_err() {
                    return ExitCode::from(2);
                }
            }
            eprintln!("config is valid");
            ExitCode::SUCCESS
        }
        Err(Invalid(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

enum Outcome {
    Reports(Vec<Timed>),
    Constructed(Vec<serde_json::Value>),
}

fn load(cli: &Cli, required: bool) -> Result<RunConfig> {
    match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?;
            config::parse(&text).with_context(|| p.display().to_string())
        }
        None if required => bail!("--config is required for this command"),
        None => Ok(RunConfig::default()),
    }
}

fn settings(cli: &Cli, cfg: &RunConfig) -> Settings {
    Settings {
        seed: cli.seed.or(cfg.seed),
        max_tuples: cli.max_tuples.or(cfg.max_tuples).map_or(DEFAULT_MAX_TUPLES, u128::from),
        max_elements: cli.max_elements.or(cfg.max_elements).map_or(DEFAULT_MAX_ELEMENTS, u128::from),
    }
}

fn dispatch(cli: &Cli) -> std::result::Result<Outcome, Invalid> {
    match &cli.command {
        Command::Construct => {
            let cfg = load(cli, true)?;
            Ok(Outcome::Constructed(construct(&config::build(&cfg)?)))
        }
        Command::Run => run_filtered(cli, |_| true, "run"),
        Command::Check { name } => run_filtered(cli, |s| s.name() == name, name),
        Command::Search { what: SearchKind::Counterexample } => {
            run_filtered(cli, |s| matches!(s, CheckSpec::CounterexampleSearch { .. }), "counterexample_search")
        }
        Command::Suite { name } => {
            let cfg = load(cli, false)?;
            let s = settings(cli, &cfg);
            let opts = SuiteOptions { seed: s.seed, max_tuples: s.max_tuples, max_elements: s.max_elements };
            let start = Instant::now();
            let reports = suites::run_suite(name, &opts)?;
            let ms = start.elapsed().as_millis();
            Ok(Outcome::Reports(reports.into_iter().map(|report| Timed { report, timing_ms: ms }).collect()))
        }
    }
}

fn run_filtered(cli: &Cli, keep: impl Fn(&CheckSpec) -> bool, what: &str) -> std::result::Result<Outcome, Invalid> {
    let cfg = load(cli, true)?;
    let objects = config::build(&cfg)?;
    let s = settings(cli, &cfg);
    let entries: Vec<_> = objects.checks.iter().enumerate().filter(|(_, e)| keep(&e.spec)).collect();
    let is_run = what == "run";
    if entries.is_empty() && !(is_run && objects.homs.iter().any(|h| h.claimed.is_some())) {
        return Err(Invalid(anyhow::anyhow!("config declares no `{what}` checks")));
    }
    runner::require_seed(&entries, s.seed)?;
    let mut reports = if is_run { runner::claim_reports(&objects) } else { Vec::new() };
    reports.extend(runner::run_checks(&objects, &entries, &s)?);
    Ok(Outcome::Reports(reports))
}

fn construct(objects: &Objects) -> Vec<serde_json::Value> {
    let mut out = Vec::new();
    for (name, r) in &objects.rings {
        out.push(json!({ "ring": name, "canonical": r.descriptor(), "size": r.size() }));
    }
    for (name, a) in &objects.algebras {
        out.push(json!({
            "algebra": name,
            "label": a.label(),
            "rank": a.rank(),
            "canonical": AlgebraSpec::canonical(a),
        }));
    }
    for h in &objects.homs {
        out.push(json!({
            "hom": h.name,
            "source": h.hom.source().label(),
            "target": h.hom.target().label(),
            "matrix": h.hom.matrix().to_rows(),
            "status": h.hom.status(),
        }));
    }
    out
}
