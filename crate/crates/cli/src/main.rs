//! `overlap` — overlap probability of two recurring events.
//!
//! Subcommands: `compute` (closed-form estimators), `simulate` (Monte
//! Carlo), `validate` (three-way cross-check), `sweep` (parameter sweeps as
//! CSV). Exit codes: 0 success, 1 failed validation check, 2 invalid input,
//! 3 internal error.

mod config;
mod error;
mod records;

use clap::{Args, Parser, Subcommand};
use config::ConfigMap;
use error::CliError;
use overlap_core::closed_form::{self, ProbabilityResult};
use overlap_core::domain::Scenario;
use overlap_core::monte_carlo::{self, SimulationError};
use overlap_core::validation::{self, GridSize};
use records::{ComputeRecord, OutputFormat, SimulateRecord};
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(name = "overlap", version, about = "Probability that two recurring events overlap")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the closed-form estimators.
    Compute(ComputeArgs),
    /// Estimate the probability by seeded Monte Carlo simulation.
    Simulate(SimulateArgs),
    /// Cross-check closed forms, discrete oracle and simulation.
    Validate(ValidateArgs),
    /// Sweep one parameter and emit a CSV of probabilities.
    Sweep(SweepArgs),
}

/// Scenario flags shared by the subcommands. All optional at the clap level;
/// a config file may supply defaults and each subcommand checks what it
/// actually needs.
#[derive(Args, Clone)]
struct ScenarioFlags {
    /// Total time window T.
    #[arg(long = "T")]
    total_time: Option<f64>,
    /// Duration of event A.
    #[arg(long)]
    ta: Option<f64>,
    /// Duration of event B.
    #[arg(long)]
    tb: Option<f64>,
    /// Occurrence count of event A.
    #[arg(long)]
    na: Option<u64>,
    /// Occurrence count of event B.
    #[arg(long)]
    nb: Option<u64>,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    scenario: ScenarioFlags,
    /// Occurrence rate of event A (occurrences per time unit).
    #[arg(long = "rate-a")]
    rate_a: Option<f64>,
    /// Occurrence rate of event B.
    #[arg(long = "rate-b")]
    rate_b: Option<f64>,
    /// precise | approx | universal | rate | all
    #[arg(long)]
    method: Option<String>,
    /// json | csv | plain
    #[arg(long)]
    format: Option<String>,
    /// Config file with `key = value` defaults for the long flags.
    #[arg(long)]
    config: Option<String>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    scenario: ScenarioFlags,
    /// Number of Monte Carlo trials.
    #[arg(long)]
    trials: Option<u64>,
    /// RNG seed (required; results are reproducible given the seed).
    #[arg(long)]
    seed: Option<u64>,
    /// Trials per deterministic chunk.
    #[arg(long = "chunk-size")]
    chunk_size: Option<u64>,
    /// json | csv | plain
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    config: Option<String>,
}

#[derive(Args)]
struct ValidateArgs {
    /// small | full — size of the exhaustive discrete box.
    #[arg(long)]
    grid: Option<String>,
    /// Monte Carlo trials per validation scenario.
    #[arg(long)]
    trials: Option<u64>,
    /// RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    config: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    scenario: ScenarioFlags,
    /// Parameter to sweep: T | ta | tb | na | nb.
    #[arg(long)]
    sweep: Option<String>,
    #[arg(long)]
    from: Option<f64>,
    #[arg(long)]
    to: Option<f64>,
    #[arg(long)]
    steps: Option<u64>,
    /// precise | approx | universal
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    config: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute(args) => cmd_compute(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Sweep(args) => cmd_sweep(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Method {
    Precise,
    Approx,
    Universal,
    Rate,
    All,
}

impl FromStr for Method {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "precise" => Ok(Method::Precise),
            "approx" => Ok(Method::Approx),
            "universal" => Ok(Method::Universal),
            "rate" => Ok(Method::Rate),
            "all" => Ok(Method::All),
            other => Err(CliError::usage(format!(
                "unknown method '{other}' (expected precise|approx|universal|rate|all)"
            ))),
        }
    }
}

const SCENARIO_KEYS: &[&str] = &["T", "ta", "tb", "na", "nb"];

struct ResolvedScenario {
    total_time: f64,
    ta: f64,
    tb: f64,
    na: u64,
    nb: u64,
}

impl ResolvedScenario {
    fn resolve(flags: &ScenarioFlags, cfg: &ConfigMap) -> Result<Self, CliError> {
        Ok(Self {
            total_time: cfg.required(flags.total_time, "T")?,
            ta: cfg.required(flags.ta, "ta")?,
            tb: cfg.required(flags.tb, "tb")?,
            na: cfg.required(flags.na, "na")?,
            nb: cfg.required(flags.nb, "nb")?,
        })
    }

    fn scenario(&self) -> Result<Scenario, CliError> {
        Scenario::from_parts(self.total_time, self.ta, self.tb, self.na, self.nb)
            .map_err(|e| CliError::usage(e.to_string()))
    }
}

fn cmd_compute(args: ComputeArgs) -> Result<u8, CliError> {
    let mut keys = vec!["method", "format", "rate-a", "rate-b"];
    keys.extend_from_slice(SCENARIO_KEYS);
    let cfg = ConfigMap::load(args.config.as_deref(), &keys)?;

    let method: Method = cfg
        .optional(args.method.clone(), "method")?
        .unwrap_or_else(|| "universal".to_string())
        .parse()?;
    let format: OutputFormat = cfg
        .optional(args.format.clone(), "format")?
        .unwrap_or_else(|| "json".to_string())
        .parse()?;
    let rate_a = cfg.optional(args.rate_a, "rate-a")?;
    let rate_b = cfg.optional(args.rate_b, "rate-b")?;

    let mut records = Vec::new();

    let count_methods: Vec<Method> = match method {
        Method::Rate => vec![],
        Method::All => vec![Method::Precise, Method::Approx, Method::Universal],
        m => vec![m],
    };

    if !count_methods.is_empty() {
        let raw = ResolvedScenario::resolve(&args.scenario, &cfg)?;
        let s = raw.scenario()?;
        for &m in &count_methods {
            let result = match m {
                Method::Precise => match closed_form::p_star(&s) {
                    Ok(r) => r,
                    // Under `all`, silently skip the inapplicable precise method.
                    Err(_) if method == Method::All => continue,
                    Err(e) => return Err(CliError::usage(e.to_string())),
                },
                Method::Approx => closed_form::p_approx(&s),
                _ => closed_form::p_universal(&s),
            };
            records.push(ComputeRecord::from_counts(&raw_echo(&raw), &s, &result));
        }
    }

    if method == Method::Rate || (method == Method::All && rate_a.is_some() && rate_b.is_some()) {
        let t = cfg.required(args.scenario.total_time, "T")?;
        let ta = cfg.required(args.scenario.ta, "ta")?;
        let tb = cfg.required(args.scenario.tb, "tb")?;
        let (ra, rb) = match (rate_a, rate_b) {
            (Some(ra), Some(rb)) => (ra, rb),
            _ => return Err(CliError::usage("method 'rate' requires --rate-a and --rate-b")),
        };
        let result = closed_form::p_universal_rate(t, ta, tb, ra, rb)
            .map_err(|e| CliError::usage(e.to_string()))?;
        records.push(ComputeRecord::from_rates(t, ta, tb, ra, rb, &result));
    }

    if records.is_empty() {
        return Err(CliError::usage("no applicable method for the given inputs"));
    }
    records::emit_compute(&records, format)?;
    Ok(0)
}

fn raw_echo(raw: &ResolvedScenario) -> (f64, f64, f64, u64, u64) {
    (raw.total_time, raw.ta, raw.tb, raw.na, raw.nb)
}

fn cmd_simulate(args: SimulateArgs) -> Result<u8, CliError> {
    let mut keys = vec!["trials", "seed", "chunk-size", "format"];
    keys.extend_from_slice(SCENARIO_KEYS);
    let cfg = ConfigMap::load(args.config.as_deref(), &keys)?;

    let raw = ResolvedScenario::resolve(&args.scenario, &cfg)?;
    let s = raw.scenario()?;
    let trials = cfg.required(args.trials, "trials")?;
    let seed = cfg.required(args.seed, "seed")?;
    let chunk_size = cfg.optional(args.chunk_size, "chunk-size")?.unwrap_or(65_536);
    let format: OutputFormat = cfg
        .optional(args.format.clone(), "format")?
        .unwrap_or_else(|| "json".to_string())
        .parse()?;

    let report = monte_carlo::estimate(&s, trials, seed, chunk_size).map_err(|e| match e {
        SimulationError::ZeroTrials
        | SimulationError::ZeroChunkSize
        | SimulationError::NotNormal(_)
        | SimulationError::NoValidPlacement { .. } => CliError::usage(e.to_string()),
    })?;
    let record = SimulateRecord::new(&raw_echo(&raw), &s, &report);
    records::emit_simulate(&record, format)?;
    Ok(0)
}

fn cmd_validate(args: ValidateArgs) -> Result<u8, CliError> {
    let cfg = ConfigMap::load(args.config.as_deref(), &["grid", "trials", "seed"])?;
    let grid_name = cfg
        .optional(args.grid.clone(), "grid")?
        .unwrap_or_else(|| "small".to_string());
    let grid = match grid_name.as_str() {
        "small" => GridSize::Small,
        "full" => GridSize::Full,
        other => {
            return Err(CliError::usage(format!(
                "unknown grid '{other}' (expected small|full)"
            )))
        }
    };
    let trials = cfg.optional(args.trials, "trials")?.unwrap_or(200_000);
    let seed = cfg.required(args.seed, "seed")?;

    let checks = validation::run_all(grid, trials, seed);
    let passed = checks.iter().all(|c| c.passed);
    let report = records::ValidationReport {
        grid: grid_name,
        trials,
        seed,
        passed,
        checks,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&report).map_err(CliError::internal)?
    );
    Ok(if passed { 0 } else { 1 })
}

fn cmd_sweep(args: SweepArgs) -> Result<u8, CliError> {
    let mut keys = vec!["sweep", "from", "to", "steps", "method"];
    keys.extend_from_slice(SCENARIO_KEYS);
    let cfg = ConfigMap::load(args.config.as_deref(), &keys)?;

    let param = cfg.required(args.sweep.clone(), "sweep")?;
    if !SCENARIO_KEYS.contains(&param.as_str()) {
        return Err(CliError::usage(format!(
            "unknown sweep parameter '{param}' (expected one of T, ta, tb, na, nb)"
        )));
    }
    let from: f64 = cfg.required(args.from, "from")?;
    let to: f64 = cfg.required(args.to, "to")?;
    let steps: u64 = cfg.required(args.steps, "steps")?;
    if steps == 0 {
        return Err(CliError::usage("steps must be at least 1"));
    }
    let method: Method = cfg
        .optional(args.method.clone(), "method")?
        .unwrap_or_else(|| "universal".to_string())
        .parse()?;
    if matches!(method, Method::Rate | Method::All) {
        return Err(CliError::usage("sweep supports methods precise, approx and universal"));
    }

    // The swept parameter need not be given as a fixed flag.
    let fixed = |flag: Option<f64>, key: &str| -> Result<f64, CliError> {
        if key == param {
            Ok(cfg.optional(flag, key)?.unwrap_or(f64::NAN))
        } else {
            cfg.required(flag, key)
        }
    };
    let t = fixed(args.scenario.total_time, "T")?;
    let ta = fixed(args.scenario.ta, "ta")?;
    let tb = fixed(args.scenario.tb, "tb")?;
    let count = |flag: Option<u64>, key: &str| -> Result<u64, CliError> {
        if key == param {
            Ok(cfg.optional(flag, key)?.unwrap_or(0))
        } else {
            cfg.required(flag, key)
        }
    };
    let na = count(args.scenario.na, "na")?;
    let nb = count(args.scenario.nb, "nb")?;

    let values: Vec<f64> = (0..steps)
        .map(|i| {
            if steps == 1 {
                from
            } else {
                from + (to - from) * i as f64 / (steps - 1) as f64
            }
        })
        .collect();

    let mut writer = csv::Writer::from_writer(std::io::stdout());
    writer
        .write_record([param.as_str(), "probability", "error_bound"])
        .map_err(CliError::internal)?;
    for v in values {
        let (t, ta, tb, na, nb) = match param.as_str() {
            "T" => (v, ta, tb, na, nb),
            "ta" => (t, v, tb, na, nb),
            "tb" => (t, ta, v, na, nb),
            key => {
                if v.fract().abs() > 1e-9 {
                    return Err(CliError::usage(format!(
                        "swept value {v} for '{key}' is not an integer count"
                    )));
                }
                match key {
                    "na" => (t, ta, tb, v.round() as u64, nb),
                    _ => (t, ta, tb, na, v.round() as u64),
                }
            }
        };
        let s = Scenario::from_parts(t, ta, tb, na, nb)
            .map_err(|e| CliError::usage(e.to_string()))?;
        let result: ProbabilityResult = match method {
            Method::Precise => closed_form::p_star(&s).map_err(|e| CliError::usage(e.to_string()))?,
            Method::Approx => closed_form::p_approx(&s),
            _ => closed_form::p_universal(&s),
        };
        writer
            .write_record([
                records::format_f64(v),
                records::format_f64(result.value),
                result.error_bound.map(records::format_f64).unwrap_or_default(),
            ])
            .map_err(CliError::internal)?;
    }
    writer.flush().map_err(CliError::internal)?;
    Ok(0)
}
