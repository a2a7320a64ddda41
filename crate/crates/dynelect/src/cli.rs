//! Experiment campaigns and the command-line surface.
//!
//! Subcommands: `generate` (write a schedule file), `run` (seeded runs with
//! oracle checks), `scaling` (termination statistics over an (n, d) grid),
//! `lowerbound` (empirical no-leader curve of the adversarial schedule
//! against its analytical floor), and `verify` (recheck schedule and trace
//! files). Campaign seeds fan out over a worker pool (`DYNELECT_WORKERS`
//! caps it); records carry their seed and are sorted on write, so outputs
//! are byte-deterministic regardless of worker count.
//!
//! Exit codes: 0 success, 2 parse/usage errors, 3 validation or construction
//! errors, 4 oracle violations, 5 I/O errors.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::engine::{self, Runner};
use crate::oracle::{self, Violation};
use crate::schedule::{self, EpochTopology, Schedule, ScheduleError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_VIOLATIONS: i32 = 4;
pub const EXIT_IO: i32 = 5;

/// Environment variable capping the campaign worker pool.
pub const WORKERS_ENV: &str = "DYNELECT_WORKERS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Validation(String),
    #[error("oracle violations: {0} finding(s); first: {1}")]
    Violations(usize, String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Violations(..) => EXIT_VIOLATIONS,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

impl From<ScheduleError> for CliError {
    fn from(e: ScheduleError) -> Self {
        match e {
            ScheduleError::Parse { .. } => CliError::Parse(e.to_string()),
            ScheduleError::Io(io) => CliError::Io {
                path: PathBuf::new(),
                source: io,
            },
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<engine::EngineError> for CliError {
    fn from(e: engine::EngineError) -> Self {
        match e {
            engine::EngineError::TraceParse { .. } => CliError::Parse(e.to_string()),
            engine::EngineError::Schedule(s) => s.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "dynelect",
    about = "Deterministic leader-election simulation under adversarial churn",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a schedule file.
    Generate(GenerateArgs),
    /// Run seeded simulations of a schedule file and summarize them.
    Run(RunArgs),
    /// Termination statistics over a grid of (n, d) cells.
    Scaling(ScalingArgs),
    /// Empirical no-leader curve of the adversarial schedule.
    Lowerbound(LowerboundArgs),
    /// Re-verify a schedule file, and optionally a trace recorded on it.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    /// Generator: lower-bound | churn | static.
    pub generator: String,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub d: u32,
    /// Number of epochs; the horizon is epochs * d rounds.
    #[arg(long, default_value_t = 8)]
    pub epochs: u32,
    /// Per-epoch removal probability (churn generator).
    #[arg(long, default_value_t = 0.5)]
    pub churn: f64,
    /// Epoch topology (churn generator): complete | random-connected.
    #[arg(long, default_value = "complete")]
    pub topology: String,
    /// Static topology: complete | star | path | cycle.
    #[arg(long, default_value = "complete")]
    pub shape: String,
    /// Generation seed.
    #[arg(long, default_value_t = 1)]
    pub seed_start: u64,
    /// Output schedule file.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Schedule file to simulate.
    #[arg(long)]
    pub schedule: PathBuf,
    /// Number of seeded runs.
    #[arg(long, default_value_t = 100)]
    pub seeds: u32,
    /// First master seed.
    #[arg(long, default_value_t = 0)]
    pub seed_start: u64,
    /// Apply the safety oracle to every run; violations exit nonzero.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub checks: bool,
    /// Also check termination with bound coeff * d * ceil(log2 n).
    #[arg(long)]
    pub bound_coefficient: Option<u32>,
    /// Skip the schedule's flooding verification (adversarial schedules
    /// guarantee the bound by construction).
    #[arg(long, default_value_t = false)]
    pub skip_verify: bool,
    /// Write per-seed trace files next to the stats.
    #[arg(long, default_value_t = false)]
    pub emit_traces: bool,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ScalingArgs {
    /// Populations, comma separated; at least three for the n-sweep.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<u32>,
    /// Diameters, comma separated; at least two for the d-sweep.
    #[arg(long, value_delimiter = ',')]
    pub d: Vec<u32>,
    #[arg(long, default_value_t = 1000)]
    pub seeds: u32,
    #[arg(long, default_value_t = 0)]
    pub seed_start: u64,
    /// Per-epoch removal probability of the generated schedules.
    #[arg(long, default_value_t = 0.5)]
    pub churn: f64,
    /// Termination bound coefficient.
    #[arg(long, default_value_t = 14)]
    pub bound_coefficient: u32,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct LowerboundArgs {
    #[arg(long, default_value_t = 32)]
    pub n: u32,
    #[arg(long, default_value_t = 4)]
    pub d: u32,
    #[arg(long, default_value_t = 4)]
    pub epochs: u32,
    /// Number of seeded schedule+run pairs.
    #[arg(long, default_value_t = 10_000)]
    pub seeds: u32,
    #[arg(long, default_value_t = 0)]
    pub seed_start: u64,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Schedule file to check.
    #[arg(long)]
    pub schedule: PathBuf,
    /// Optional trace file recorded on that schedule; reruns the oracle.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Termination bound applied during trace verification, in rounds.
    #[arg(long)]
    pub termination_bound: Option<u32>,
}

/// Full description of a campaign, serialized as the JSON sidecar next to
/// every output file.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub command: String,
    pub generator: String,
    pub cells: Vec<(u32, u32)>,
    pub seeds: u32,
    pub seed_start: u64,
    pub churn: f64,
    pub bound_coefficient: Option<u32>,
    /// Output location; not part of the experiment's identity.
    #[serde(skip)]
    pub out: PathBuf,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.seeds < 1 {
            return Err(CliError::Validation("seeds must be at least 1".into()));
        }
        if self.cells.is_empty() {
            return Err(CliError::Validation("no (n, d) cells configured".into()));
        }
        Ok(())
    }

    /// Hash that ties every output file to the configuration that made it.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        hex::encode(&digest[..8])
    }
}

/// Termination bound in rounds: `coeff * d * ceil(log2 n)`.
pub fn termination_bound(coeff: u32, n: u32, d: u32) -> u32 {
    let ceil_log = if n <= 2 { 1 } else { (n - 1).ilog2() + 1 };
    coeff * d * ceil_log
}

/// Statistics of one seeded run within a campaign.
#[derive(Debug, Clone, Serialize)]
pub struct SeedSummary {
    pub seed: u64,
    pub episodes: u32,
    pub resolved: u32,
    pub unresolved: u32,
    pub max_episode: u32,
    pub phases: u32,
    pub successes: u32,
    pub messages: u64,
    pub violations: u32,
}

pub struct CampaignOutcome {
    pub summaries: Vec<SeedSummary>,
    pub termination_lengths: Vec<u32>,
    pub phases_to_success: Vec<u32>,
    pub violations: Vec<(u64, Violation)>,
    /// Runs in which every checkable episode resolved within the bound.
    pub runs_within_bound: u32,
    pub runs: u32,
}

/// Runs `seeds` master seeds over a prepared runner, applying the oracle as
/// configured. Results are ordered by seed regardless of scheduling.
pub fn run_campaign(
    runner: &Runner,
    seed_start: u64,
    seeds: u32,
    checks: bool,
    bound: Option<u32>,
) -> Result<CampaignOutcome, CliError> {
    let results: Result<Vec<_>, CliError> = (0..seeds)
        .into_par_iter()
        .map(|i| {
            let seed = seed_start + u64::from(i);
            let trace = runner
                .run(seed)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let stats = engine::summarize(&trace);
            let mut violations = if checks {
                oracle::check_all(&trace, None)
            } else {
                Vec::new()
            };
            let mut within_bound = true;
            if let Some(b) = bound {
                let term = oracle::check_termination(&trace, b);
                within_bound = term.is_empty();
                violations.extend(term);
            }
            Ok((seed, stats, violations, within_bound))
        })
        .collect();
    let mut results = results?;
    results.sort_by_key(|(seed, ..)| *seed);

    let mut outcome = CampaignOutcome {
        summaries: Vec::with_capacity(results.len()),
        termination_lengths: Vec::new(),
        phases_to_success: Vec::new(),
        violations: Vec::new(),
        runs_within_bound: 0,
        runs: seeds,
    };
    for (seed, stats, violations, within_bound) in results {
        let lengths = stats.termination_lengths();
        outcome.summaries.push(SeedSummary {
            seed,
            episodes: stats.episodes.len() as u32,
            resolved: lengths.len() as u32,
            unresolved: stats.unresolved_episodes() as u32,
            max_episode: lengths.iter().copied().max().unwrap_or(0),
            phases: stats.phases.len() as u32,
            successes: stats.phases.iter().filter(|p| p.successful).count() as u32,
            messages: stats.messages.total,
            violations: violations.len() as u32,
        });
        outcome.termination_lengths.extend(lengths);
        outcome.phases_to_success.extend(stats.phases_to_success());
        if within_bound {
            outcome.runs_within_bound += 1;
        }
        outcome
            .violations
            .extend(violations.into_iter().map(|v| (seed, v)));
    }
    Ok(outcome)
}

/// Nearest-rank percentile of a sample.
pub fn percentile(samples: &[u32], pct: f64) -> u32 {
    if samples.is_empty() {
        return 0;
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable();
    let rank = ((pct / 100.0) * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

fn mean(samples: &[u32]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    samples.iter().map(|x| f64::from(*x)).sum::<f64>() / samples.len() as f64
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(io_err(path))?;
        }
    }
    std::fs::write(path, contents).map_err(io_err(path))
}

fn write_sidecar(dir: &Path, config: &ExperimentConfig) -> Result<(), CliError> {
    let mut json = serde_json::to_string_pretty(config).expect("config serializes");
    json.push('\n');
    write_file(&dir.join("config.json"), &json)
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<(), CliError> {
    let horizon = args
        .epochs
        .checked_mul(args.d)
        .ok_or_else(|| CliError::Validation("epochs * d overflows the round counter".into()))?;
    let schedule = match args.generator.as_str() {
        "lower-bound" => schedule::lower_bound(args.n, args.d, args.epochs, args.seed_start)?,
        "churn" => {
            let topology = parse_topology(&args.topology)?;
            schedule::churn(
                args.n,
                args.d,
                horizon,
                args.churn,
                topology,
                args.seed_start,
            )?
        }
        "static" => {
            let edges = named_topology(&args.shape, args.n)?;
            schedule::static_schedule(args.n, args.d, horizon, &edges)?
        }
        other => {
            return Err(CliError::Parse(format!(
                "unknown generator {other:?}; expected lower-bound, churn or static"
            )))
        }
    };
    write_file(&args.out, &schedule::serialize_schedule(&schedule))?;
    println!(
        "wrote {} ({} rounds, n={}, d={})",
        args.out.display(),
        schedule.horizon(),
        schedule.n(),
        schedule.d()
    );
    Ok(())
}

/// Loads and parses a schedule file, attributing I/O failures to the path
/// and malformed contents to the parse class.
fn load_schedule(path: &Path) -> Result<Schedule, CliError> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    schedule::parse_schedule(&text).map_err(CliError::from)
}

fn parse_topology(name: &str) -> Result<EpochTopology, CliError> {
    match name {
        "complete" => Ok(EpochTopology::CompleteAtEpoch),
        "random-connected" => Ok(EpochTopology::RandomConnectedAtEpoch),
        other => Err(CliError::Parse(format!(
            "unknown epoch topology {other:?}; expected complete or random-connected"
        ))),
    }
}

/// Edge list of a named static topology on nodes `1..=n`.
pub fn named_topology(shape: &str, n: u32) -> Result<Vec<(u64, u64)>, CliError> {
    let n = u64::from(n);
    let edges = match shape {
        "complete" => {
            let mut e = Vec::new();
            for a in 1..=n {
                for b in a + 1..=n {
                    e.push((a, b));
                }
            }
            e
        }
        "star" => (2..=n).map(|b| (1, b)).collect(),
        "path" => (1..n).map(|a| (a, a + 1)).collect(),
        "cycle" => {
            let mut e: Vec<(u64, u64)> = (1..n).map(|a| (a, a + 1)).collect();
            if n > 2 {
                e.push((1, n));
            }
            e
        }
        other => {
            return Err(CliError::Parse(format!(
                "unknown static shape {other:?}; expected complete, star, path or cycle"
            )))
        }
    };
    Ok(edges)
}

pub fn cmd_run(args: &RunArgs) -> Result<(), CliError> {
    let schedule = Arc::new(load_schedule(&args.schedule)?);
    let runner = if args.skip_verify {
        Runner::new_unchecked(Arc::clone(&schedule))
    } else {
        Runner::new(Arc::clone(&schedule))?
    };
    let bound = args
        .bound_coefficient
        .map(|c| termination_bound(c, schedule.n(), schedule.d()));
    let config = ExperimentConfig {
        command: "run".into(),
        generator: schedule.generator().to_string(),
        cells: vec![(schedule.n(), schedule.d())],
        seeds: args.seeds,
        seed_start: args.seed_start,
        churn: f64::NAN,
        bound_coefficient: args.bound_coefficient,
        out: args.out.clone(),
    };
    config.validate()?;
    let outcome = run_campaign(&runner, args.seed_start, args.seeds, args.checks, bound)?;

    let mut csv = format!("# config {}\n", config.hash());
    csv.push_str(
        "seed,episodes,resolved,unresolved,max_episode,phases,successes,messages,violations\n",
    );
    for s in &outcome.summaries {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            s.seed,
            s.episodes,
            s.resolved,
            s.unresolved,
            s.max_episode,
            s.phases,
            s.successes,
            s.messages,
            s.violations
        ));
    }
    write_file(&args.out.join("stats.csv"), &csv)?;
    write_sidecar(&args.out, &config)?;

    if !outcome.violations.is_empty() {
        let mut report = String::new();
        for (seed, v) in &outcome.violations {
            let mut obj = serde_json::to_value(v).expect("violation serializes");
            obj["seed"] = serde_json::json!(seed);
            report.push_str(&serde_json::to_string(&obj).expect("violation serializes"));
            report.push('\n');
        }
        write_file(&args.out.join("violations.jsonl"), &report)?;
    }
    if args.emit_traces {
        for i in 0..args.seeds {
            let seed = args.seed_start + u64::from(i);
            let trace = runner
                .run(seed)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            write_file(
                &args.out.join(format!("trace_{seed}.jsonl")),
                &engine::serialize_trace(&trace),
            )?;
        }
    }
    println!(
        "{} runs, {} episodes resolved, {} violations",
        outcome.runs,
        outcome.termination_lengths.len(),
        outcome.violations.len()
    );
    if !outcome.violations.is_empty() {
        let first = outcome.violations[0].1.to_string();
        return Err(CliError::Violations(outcome.violations.len(), first));
    }
    Ok(())
}

/// One row of the scaling table.
#[derive(Debug, Clone, Serialize)]
pub struct ScalingCell {
    pub n: u32,
    pub d: u32,
    pub seeds: u32,
    pub p99_termination: u32,
    pub mean_phases_to_success: f64,
    pub termination_per_d_log2n: f64,
    pub within_bound_fraction: f64,
}

/// Runs the scaling campaign over the (n, d) grid and returns the cells in
/// grid order.
pub fn scaling_campaign(args: &ScalingArgs) -> Result<Vec<ScalingCell>, CliError> {
    if args.n.len() < 3 {
        return Err(CliError::Validation(
            "scaling needs at least three populations (--n)".into(),
        ));
    }
    if args.d.len() < 2 {
        return Err(CliError::Validation(
            "scaling needs at least two diameters (--d)".into(),
        ));
    }
    if args.seeds < 1000 {
        return Err(CliError::Validation(
            "scaling statistics need at least 1000 seeds per cell".into(),
        ));
    }
    let mut cells = Vec::new();
    for &n in &args.n {
        for &d in &args.d {
            let bound = termination_bound(args.bound_coefficient, n, d);
            let horizon = bound + 4 * d;
            let schedule = schedule::churn(
                n,
                d,
                horizon,
                args.churn,
                EpochTopology::CompleteAtEpoch,
                args.seed_start,
            )?;
            let runner = Runner::new(Arc::new(schedule))?;
            let outcome = run_campaign(&runner, args.seed_start, args.seeds, false, Some(bound))?;
            let p99 = percentile(&outcome.termination_lengths, 99.0);
            let denom = f64::from(d) * f64::from(n.max(2)).log2();
            cells.push(ScalingCell {
                n,
                d,
                seeds: args.seeds,
                p99_termination: p99,
                mean_phases_to_success: mean(&outcome.phases_to_success),
                termination_per_d_log2n: f64::from(p99) / denom,
                within_bound_fraction: f64::from(outcome.runs_within_bound)
                    / f64::from(outcome.runs),
            });
        }
    }
    Ok(cells)
}

pub fn cmd_scaling(args: &ScalingArgs) -> Result<(), CliError> {
    let config = ExperimentConfig {
        command: "scaling".into(),
        generator: format!("churn(rate={},topology=complete)", args.churn),
        cells: args
            .n
            .iter()
            .flat_map(|n| args.d.iter().map(move |d| (*n, *d)))
            .collect(),
        seeds: args.seeds,
        seed_start: args.seed_start,
        churn: args.churn,
        bound_coefficient: Some(args.bound_coefficient),
        out: args.out.clone(),
    };
    config.validate()?;
    let cells = scaling_campaign(args)?;
    let mut csv = format!("# config {}\n", config.hash());
    csv.push_str(
        "n,d,seeds,p99_termination,mean_phases_to_success,termination_per_d_log2n,within_bound_fraction\n",
    );
    for c in &cells {
        csv.push_str(&format!(
            "{},{},{},{},{:.4},{:.4},{:.4}\n",
            c.n,
            c.d,
            c.seeds,
            c.p99_termination,
            c.mean_phases_to_success,
            c.termination_per_d_log2n,
            c.within_bound_fraction
        ));
        println!(
            "n={:<4} d={:<2} p99={:<6} phases-to-success={:.2} term/(d*log2 n)={:.2} within-bound={:.3}",
            c.n, c.d, c.p99_termination, c.mean_phases_to_success,
            c.termination_per_d_log2n, c.within_bound_fraction
        );
    }
    write_file(&args.out.join("scaling.csv"), &csv)?;
    write_sidecar(&args.out, &config)
}

/// One row of the lower-bound table.
#[derive(Debug, Clone, Serialize)]
pub struct LowerboundRow {
    pub i: u32,
    pub empirical: f64,
    pub floor: f64,
    pub std_err: f64,
}

/// Runs the adversarial campaign: one schedule seed and one master seed per
/// trial, fresh per trial, since the adversary's coin flips are part of the
/// experiment.
pub fn lowerbound_campaign(args: &LowerboundArgs) -> Result<Vec<LowerboundRow>, CliError> {
    let traces: Result<Vec<_>, CliError> = (0..args.seeds)
        .into_par_iter()
        .map(|i| {
            let seed = args.seed_start + u64::from(i);
            let schedule = schedule::lower_bound(args.n, args.d, args.epochs, seed)?;
            // The epoch construction guarantees the flooding bound; skip the
            // per-trial verification.
            let runner = Runner::new_unchecked(Arc::new(schedule));
            runner
                .run(seed)
                .map_err(|e| CliError::Validation(e.to_string()))
        })
        .collect();
    let traces = traces?;
    let curve = oracle::lower_bound_curve(&traces, args.d);
    Ok(curve
        .into_iter()
        .map(|p| {
            let var = p.empirical * (1.0 - p.empirical) / f64::from(args.seeds);
            LowerboundRow {
                i: p.i,
                empirical: p.empirical,
                floor: oracle::no_leader_floor(p.i),
                std_err: var.sqrt(),
            }
        })
        .collect())
}

pub fn cmd_lowerbound(args: &LowerboundArgs) -> Result<(), CliError> {
    let config = ExperimentConfig {
        command: "lowerbound".into(),
        generator: "lower-bound".into(),
        cells: vec![(args.n, args.d)],
        seeds: args.seeds,
        seed_start: args.seed_start,
        churn: 0.5,
        bound_coefficient: None,
        out: args.out.clone(),
    };
    config.validate()?;
    let rows = lowerbound_campaign(args)?;
    let mut csv = format!("# config {}\n", config.hash());
    csv.push_str("i,empirical_no_leader,floor,std_err\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{:.6},{:.6},{:.6}\n",
            r.i, r.empirical, r.floor, r.std_err
        ));
        println!(
            "i={:<3} empirical={:.4} floor={:.5}",
            r.i, r.empirical, r.floor
        );
    }
    write_file(&args.out.join("lowerbound.csv"), &csv)?;
    write_sidecar(&args.out, &config)
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let schedule = Arc::new(load_schedule(&args.schedule)?);
    match schedule::verify_comm_diameter(&schedule) {
        Ok(()) => println!(
            "schedule ok: flooding guarantee holds over {} rounds (n={}, d={})",
            schedule.horizon(),
            schedule.n(),
            schedule.d()
        ),
        Err(cex) => {
            return Err(CliError::Validation(format!(
                "schedule violates the flooding guarantee: {cex}"
            )))
        }
    }
    if let Some(trace_path) = &args.trace {
        let text = std::fs::read_to_string(trace_path).map_err(io_err(trace_path))?;
        let trace = engine::parse_trace(&text, Arc::clone(&schedule))?;
        let violations = oracle::check_all(&trace, args.termination_bound);
        if violations.is_empty() {
            println!("trace ok: all oracle checks clean");
        } else {
            for v in violations.iter().take(10) {
                eprintln!("{v}");
            }
            return Err(CliError::Violations(
                violations.len(),
                violations[0].to_string(),
            ));
        }
    }
    Ok(())
}

/// Builds the worker pool from the environment and dispatches a parsed
/// command line. Returns the process exit code.
pub fn main_with(cli: Cli) -> i32 {
    if let Ok(workers) = std::env::var(WORKERS_ENV) {
        if let Ok(count) = workers.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(count.max(1))
                .build_global();
        }
    }
    let result = match &cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Run(args) => cmd_run(args),
        Command::Scaling(args) => cmd_scaling(args),
        Command::Lowerbound(args) => cmd_lowerbound(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
