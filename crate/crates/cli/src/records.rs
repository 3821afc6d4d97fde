//! Machine-readable output records and the json/csv/plain emitters.
//!
//! JSON key order is fixed by the struct field order; CSV numbers use
//! Rust's shortest round-trip formatting so re-parsing a sweep reproduces
//! the values bit-exactly.

use crate::error::CliError;
use overlap_core::closed_form::{Method, ProbabilityResult};
use overlap_core::domain::{FeasibilityClass, Scenario};
use overlap_core::monte_carlo::SimulationReport;
use overlap_core::validation::CheckResult;
use serde::Serialize;
use std::str::FromStr;

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Plain,
}

impl FromStr for OutputFormat {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "plain" => Ok(OutputFormat::Plain),
            other => Err(CliError::usage(format!(
                "unknown format '{other}' (expected json|csv|plain)"
            ))),
        }
    }
}

/// One closed-form evaluation, echoing the scenario as the caller gave it.
#[derive(Serialize)]
pub struct ComputeRecord {
    pub total_time: f64,
    pub dur_a: f64,
    pub dur_b: f64,
    pub count_a: Option<u64>,
    pub count_b: Option<u64>,
    pub rate_a: Option<f64>,
    pub rate_b: Option<f64>,
    pub swapped: bool,
    pub method: Method,
    pub probability: f64,
    pub raw_value: f64,
    pub error_bound: Option<f64>,
    pub guard: Option<FeasibilityClass>,
    pub clamped: bool,
}

impl ComputeRecord {
    pub fn from_counts(
        raw: &(f64, f64, f64, u64, u64),
        scenario: &Scenario,
        result: &ProbabilityResult,
    ) -> Self {
        let &(total_time, dur_a, dur_b, count_a, count_b) = raw;
        Self {
            total_time,
            dur_a,
            dur_b,
            count_a: Some(count_a),
            count_b: Some(count_b),
            rate_a: None,
            rate_b: None,
            swapped: scenario.swapped(),
            method: result.method,
            probability: result.value,
            raw_value: result.raw_value,
            error_bound: result.error_bound,
            guard: result.guard,
            clamped: result.clamped,
        }
    }

    pub fn from_rates(
        total_time: f64,
        dur_a: f64,
        dur_b: f64,
        rate_a: f64,
        rate_b: f64,
        result: &ProbabilityResult,
    ) -> Self {
        Self {
            total_time,
            dur_a,
            dur_b,
            count_a: None,
            count_b: None,
            rate_a: Some(rate_a),
            rate_b: Some(rate_b),
            swapped: dur_a < dur_b,
            method: result.method,
            probability: result.value,
            raw_value: result.raw_value,
            error_bound: result.error_bound,
            guard: result.guard,
            clamped: result.clamped,
        }
    }
}

/// One simulation run.
#[derive(Serialize)]
pub struct SimulateRecord {
    pub total_time: f64,
    pub dur_a: f64,
    pub dur_b: f64,
    pub count_a: u64,
    pub count_b: u64,
    pub swapped: bool,
    pub method: &'static str,
    pub probability: f64,
    pub trials: u64,
    pub hits: u64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
    pub chunk_size: u64,
}

impl SimulateRecord {
    pub fn new(
        raw: &(f64, f64, f64, u64, u64),
        scenario: &Scenario,
        report: &SimulationReport,
    ) -> Self {
        let &(total_time, dur_a, dur_b, count_a, count_b) = raw;
        Self {
            total_time,
            dur_a,
            dur_b,
            count_a,
            count_b,
            swapped: scenario.swapped(),
            method: "simulate",
            probability: report.estimate,
            trials: report.trials,
            hits: report.hits,
            std_error: report.std_error,
            ci_low: report.ci_low,
            ci_high: report.ci_high,
            seed: report.seed,
            chunk_size: report.chunk_size,
        }
    }
}

/// Report of `overlap validate`.
#[derive(Serialize)]
pub struct ValidationReport {
    pub grid: String,
    pub trials: u64,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

/// Shortest representation that parses back to the same f64.
pub fn format_f64(v: f64) -> String {
    format!("{v}")
}

pub fn emit_compute(records: &[ComputeRecord], format: OutputFormat) -> Result<(), CliError> {
    match format {
        OutputFormat::Json => {
            let text = if records.len() == 1 {
                serde_json::to_string_pretty(&records[0])
            } else {
                serde_json::to_string_pretty(records)
            }
            .map_err(CliError::internal)?;
            println!("{text}");
        }
        OutputFormat::Csv => {
            let mut writer = csv::Writer::from_writer(std::io::stdout());
            for record in records {
                writer.serialize(record).map_err(CliError::internal)?;
            }
            writer.flush().map_err(CliError::internal)?;
        }
        OutputFormat::Plain => {
            for record in records {
                print_plain(record)?;
                println!();
            }
        }
    }
    Ok(())
}

pub fn emit_simulate(record: &SimulateRecord, format: OutputFormat) -> Result<(), CliError> {
    match format {
        OutputFormat::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(record).map_err(CliError::internal)?
            );
        }
        OutputFormat::Csv => {
            let mut writer = csv::Writer::from_writer(std::io::stdout());
            writer.serialize(record).map_err(CliError::internal)?;
            writer.flush().map_err(CliError::internal)?;
        }
        OutputFormat::Plain => print_plain(record)?,
    }
    Ok(())
}

/// Aligned `key  value` lines, derived from the JSON form so plain output
/// always matches the schema.
fn print_plain<T: Serialize>(record: &T) -> Result<(), CliError> {
    let value = serde_json::to_value(record).map_err(CliError::internal)?;
    let map = value.as_object().expect("records are objects");
    let width = map.keys().map(String::len).max().unwrap_or(0);
    for (key, value) in map {
        let shown = match value {
            serde_json::Value::Null => "-".to_string(),
            serde_json::Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        println!("{key:<width$}  {shown}");
    }
    Ok(())
}
