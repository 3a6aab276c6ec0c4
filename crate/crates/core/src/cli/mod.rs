//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage or validation error,
//! 3 numerical failure (the mediation report is still written).

mod report;
mod svg;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub use report::{
    Coefficient, EffectRow, Metadata, MethodReport, MethodStatus, ModelDescription,
    ModelDiagnostics, Report, SCHEMA_VERSION,
};
pub use svg::{emit_forest_svg, render_forest_svg};

use crate::data::load_csv_columns;
use crate::error::Error;
use crate::inference::{mediate, MediationRequest, MethodChoice};
use crate::simulation::{
    run_power_study_with, run_scenario_with, write_metrics_csv, write_replicate_log, ErrorLaw,
    PowerReport, RunOptions, ScenarioConfig,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "semimed",
    version,
    about = "Causal mediation with OLS and semiparametric efficient estimation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate mediation effects on a CSV dataset.
    Mediate(MediateArgs),
    /// Run a Monte Carlo scenario and write its metrics table.
    Simulate(SimulateArgs),
    /// Run the near-boundary power study.
    Power(PowerArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodFlag {
    Ols,
    Semi,
    Both,
}

impl From<MethodFlag> for MethodChoice {
    fn from(m: MethodFlag) -> Self {
        match m {
            MethodFlag::Ols => MethodChoice::Ols,
            MethodFlag::Semi => MethodChoice::Semiparametric,
            MethodFlag::Both => MethodChoice::Both,
        }
    }
}

#[derive(Debug, Args)]
struct MediateArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    treatment: String,
    #[arg(long)]
    mediator: String,
    #[arg(long)]
    outcome: String,
    /// Comma-separated covariate columns.
    #[arg(long, value_delimiter = ',')]
    covariates: Vec<String>,
    /// Include the treatment-by-mediator term in the outcome model.
    #[arg(long)]
    interaction: bool,
    #[arg(long, value_enum, default_value = "both")]
    method: MethodFlag,
    /// Multiply the outcome column by this factor before fitting.
    #[arg(long, default_value_t = 1.0)]
    scale_outcome: f64,
    /// JSON report path; printed to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// SVG forest plot path.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    scenario: ErrorLaw,
    #[arg(long, default_value_t = 300)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Metrics CSV path; printed to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-replicate CSV log path.
    #[arg(long)]
    log: Option<PathBuf>,
    /// Worker threads (results do not depend on this).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct PowerArgs {
    #[arg(long, default_value_t = 1000)]
    reps: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// JSON output path; printed to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
}

/// Output of the `power` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerOutput {
    pub schema_version: u32,
    pub metadata: Metadata,
    #[serde(flatten)]
    pub report: PowerReport,
}

/// Parses `std::env::args` and runs the command.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Mediate(a) => cmd_mediate(&a),
        Command::Simulate(a) => cmd_simulate(&a),
        Command::Power(a) => cmd_power(&a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { .. } => EXIT_IO,
        Error::Csv(c) if matches!(c.kind(), csv::ErrorKind::Io(_)) => EXIT_IO,
        Error::Singular { .. }
        | Error::NegativeVariance { .. }
        | Error::NumericalFailure { .. } => EXIT_NUMERICAL,
        _ => EXIT_USAGE,
    }
}

fn write_output(path: Option<&Path>, contents: &[u8]) -> crate::Result<()> {
    match path {
        Some(p) => std::fs::write(p, contents).map_err(|e| Error::io(p, e)),
        None => std::io::stdout()
            .write_all(contents)
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

fn to_json<T: Serialize>(value: &T) -> crate::Result<Vec<u8>> {
    let mut s = serde_json::to_vec_pretty(value).map_err(|e| Error::Malformed(e.to_string()))?;
    s.push(b'\n');
    Ok(s)
}

fn cmd_mediate(a: &MediateArgs) -> crate::Result<i32> {
    if !(a.scale_outcome.is_finite() && a.scale_outcome > 0.0) {
        return Err(Error::InvalidSpec(format!(
            "--scale-outcome must be positive, got {}",
            a.scale_outcome
        )));
    }
    let request = MediationRequest {
        treatment: a.treatment.clone(),
        mediator: a.mediator.clone(),
        outcome: a.outcome.clone(),
        covariates: a.covariates.clone(),
        interaction: a.interaction,
        method: a.method.into(),
    };
    let mut dataset = load_csv_columns(&a.data, &request.referenced_columns())?;
    if a.scale_outcome != 1.0 {
        dataset = dataset.scale_column(&a.outcome, a.scale_outcome)?;
    }
    let result = mediate(&dataset, &request)?;

    let mut metadata = Metadata::new("mediate", None);
    metadata.data_path = Some(a.data.display().to_string());
    metadata.rows_used = Some(dataset.n());
    metadata.rows_dropped = Some(dataset.rows_dropped());
    let model = ModelDescription {
        treatment: a.treatment.clone(),
        mediator: a.mediator.clone(),
        outcome: a.outcome.clone(),
        covariates: a.covariates.clone(),
        interaction: a.interaction,
        outcome_scale: a.scale_outcome,
        covariate_means: result.xbar.clone(),
    };
    let report = Report::from_result(metadata, model, &result);
    write_output(a.out.as_deref(), &to_json(&report)?)?;

    if let Some(plot) = &a.plot {
        let estimates: Vec<_> = result
            .methods
            .iter()
            .filter_map(|m| m.estimate().map(|e| (m.method, &e.effects)))
            .collect();
        if !estimates.is_empty() {
            emit_forest_svg(&estimates, plot)?;
        }
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    Ok(if result.any_failed() {
        EXIT_NUMERICAL
    } else {
        EXIT_OK
    })
}

fn cmd_simulate(a: &SimulateArgs) -> crate::Result<i32> {
    let config = ScenarioConfig::main(a.scenario, a.n, a.reps, a.seed);
    let run = run_scenario_with(&config, &RunOptions { threads: a.threads })?;
    let mut metrics = Vec::new();
    write_metrics_csv(&run.metrics, &mut metrics)?;
    write_output(a.out.as_deref(), &metrics)?;
    if let Some(path) = &a.log {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        write_replicate_log(&run.replicates, BufWriter::new(file))?;
    }
    for w in &run.warnings {
        eprintln!("warning: {w}");
    }
    Ok(EXIT_OK)
}

fn cmd_power(a: &PowerArgs) -> crate::Result<i32> {
    let config = ScenarioConfig::power(a.reps, a.seed);
    let report = run_power_study_with(&config, &RunOptions { threads: a.threads })?;
    let output = PowerOutput {
        schema_version: SCHEMA_VERSION,
        metadata: Metadata::new("power", Some(a.seed)),
        report,
    };
    write_output(a.out.as_deref(), &to_json(&output)?)?;
    Ok(EXIT_OK)
}
