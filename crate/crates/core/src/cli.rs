//! Command-line front end for `teleport-sim`.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::report::{exact_report, numeric_report, sweep_report, Report};

pub const DEFAULT_SWEEP_SAMPLES: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    Bennett,
    Naive,
    Symmetric,
    VerifyBases,
    Sweep,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Bennett => "bennett",
            Scenario::Naive => "naive",
            Scenario::Symmetric => "symmetric",
            Scenario::VerifyBases => "verify-bases",
            Scenario::Sweep => "sweep",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Exact,
    Numeric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Exact simulation of teleportation with indistinguishable photons.
#[derive(Clone, Debug, Parser)]
#[command(name = "teleport-sim", version)]
pub struct RunConfig {
    pub scenario: Scenario,
    /// Amplitude backend; `exact` by default, `numeric` for sweeps.
    #[arg(long, value_enum)]
    pub backend: Option<Backend>,
    /// Root seed for random inputs.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of random inputs (sweep only).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] crate::error::Error),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<Backend, CliError> {
        let sweep = self.scenario == Scenario::Sweep;
        if self.samples.is_some() && !sweep {
            return Err(CliError::Usage("--samples applies only to sweep".into()));
        }
        match (sweep, self.backend) {
            (true, Some(Backend::Exact)) => Err(CliError::Usage(
                "sweep compares against the numeric backend; use --backend numeric".into(),
            )),
            (true, _) => Ok(Backend::Numeric),
            (false, b) => Ok(b.unwrap_or(Backend::Exact)),
        }
    }
}

pub fn build_report(config: &RunConfig) -> Result<Report, CliError> {
    let backend = config.validate()?;
    let name = config.scenario.name();
    let report = match (config.scenario, backend) {
        (Scenario::Sweep, _) => {
            let n = config.samples.map_or(DEFAULT_SWEEP_SAMPLES, |n| n as usize);
            sweep_report(config.seed, n)?
        }
        (_, Backend::Exact) => exact_report(name, config.seed)?,
        (_, Backend::Numeric) => numeric_report(name, config.seed)?,
    };
    Ok(report)
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json() + "\n",
    }
}

/// Runs one invocation and returns the process exit code: 0 when every check
/// passes, 1 on a failed check or computation error, 2 on a usage error.
pub fn run(config: &RunConfig) -> i32 {
    let result = build_report(config).and_then(|report| {
        let text = render(&report, config.format);
        match &config.output {
            Some(path) => fs::write(path, text)?,
            None => std::io::stdout().write_all(text.as_bytes())?,
        }
        Ok(report)
    });
    match result {
        Ok(report) if report.passed() => 0,
        Ok(report) => {
            for c in report.failures() {
                eprintln!("check failed: {}", c.name);
            }
            1
        }
        Err(e) => {
            eprintln!("teleport-sim: {e}");
            e.exit_code()
        }
    }
}
