//! `halfelastica`: classification, curve generation, period-map scans and
//! string search from the command line.

mod commands;
mod error;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::CliError;

#[derive(Parser)]
#[command(
    name = "halfelastica",
    version,
    about = "Constrained 1/2-elasticae in the hyperbolic plane"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Region, roots and wavelength of a moduli point.
    Classify(RunConfig),
    /// Sampled curve with its curvature, frame position and Poincaré image.
    Curve(RunConfig),
    /// The (mu, mu_dot) phase-plane image over one period.
    Signature(RunConfig),
    /// Period map over the time-like interval of a multiplier.
    ScanPeriod(RunConfig),
    /// Closed time-like string with characteristic number q.
    FindString(RunConfig),
    /// The fiber of the period map over q.
    Fiber(RunConfig),
    /// Equilibria and periodic orbits of the curvature flow.
    PhasePortrait(RunConfig),
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Multiplier lambda.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Minimum e2 of the Blaschke invariant.
    #[arg(long, allow_hyphen_values = true)]
    pub e2: Option<f64>,
    /// Characteristic number as "m/n".
    #[arg(long)]
    pub q: Option<String>,
    /// Samples per period (or scan points, or fiber steps).
    #[arg(long, default_value_t = 2048, value_parser = clap::value_parser!(u64).range(16..))]
    pub samples: u64,
    /// Number of periods to generate.
    #[arg(long, default_value_t = 1.0)]
    pub periods: f64,
    /// Accepted residual of root solves.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format; each command has its own default.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

fn run(cli: Cli) -> Result<commands::Outcome, CliError> {
    match cli.command {
        Command::Classify(cfg) => commands::classify(&cfg),
        Command::Curve(cfg) => commands::curve(&cfg),
        Command::Signature(cfg) => commands::signature(&cfg),
        Command::ScanPeriod(cfg) => commands::scan_period(&cfg),
        Command::FindString(cfg) => commands::find_string(&cfg),
        Command::Fiber(cfg) => commands::fiber(&cfg),
        Command::PhasePortrait(cfg) => commands::phase_portrait(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    let out = match &cli.command {
        Command::Classify(c)
        | Command::Curve(c)
        | Command::Signature(c)
        | Command::ScanPeriod(c)
        | Command::FindString(c)
        | Command::Fiber(c)
        | Command::PhasePortrait(c) => c.out.clone(),
    };
    let result = run(cli).and_then(|outcome| {
        commands::emit(&outcome.text, out.as_deref())?;
        Ok(outcome)
    });
    match result {
        Ok(outcome) => {
            if let Some(msg) = &outcome.warning {
                eprintln!("halfelastica: {msg}");
            }
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("halfelastica: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
