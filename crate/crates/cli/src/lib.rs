//! Command-line front end for `zs-toda-core`: verification suites, wave-function
//! evaluation and numeric checks, with JSON and CSV reports.

pub mod commands;
pub mod report;
pub mod settings;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

pub use commands::{execute, CheckTarget, CompareTarget, EvalTarget, Suite, Task};
pub use report::{GridInfo, Record, Report, SCHEMA_VERSION};
pub use settings::Settings;

#[derive(Debug, Parser)]
#[command(name = "zs-toda", version, about = "Exact so(N) shift-operator checks and B_n Toda wave functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// TOML file with default settings; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub settings: Settings,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Exact identity suites.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Evaluate the wave function at a point or along a scan.
    Eval {
        #[arg(value_enum)]
        target: EvalTarget,
    },
    /// Numeric checks and the partial-fraction identity.
    Check {
        #[arg(value_enum)]
        target: CheckTarget,
    },
    /// Compare the integration routes at one point.
    Compare {
        #[arg(value_enum)]
        target: CompareTarget,
    },
}

impl Command {
    pub fn task(self) -> Task {
        match self {
            Command::Verify { suite } => Task::Verify(suite),
            Command::Eval { target } => Task::Eval(target),
            Command::Check { target } => Task::Check(target),
            Command::Compare { target } => Task::Compare(target),
        }
    }
}

/// Process exit codes.
pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// Effective settings: flags over the config file.
pub fn resolve(cli: &Cli) -> Result<Settings> {
    let file = match &cli.config {
        Some(path) => Settings::from_toml_file(path)?,
        None => Settings::default(),
    };
    Ok(cli.settings.clone().over(file))
}

/// Runs the command and times it.
pub fn run(cli: &Cli) -> Result<Report> {
    let cfg = resolve(cli)?;
    let start = Instant::now();
    let mut report = execute(cli.command.task(), &cfg)?;
    if cfg.no_timing != Some(true) {
        report.wall_time_s = Some(start.elapsed().as_secs_f64());
    }
    Ok(report)
}

/// Writes the report in the configured format to `--out` or standard output.
pub fn emit(report: &Report) -> Result<()> {
    let format = report.config.format.as_deref().unwrap_or("json");
    let mut buf = Vec::new();
    match format {
        "json" => {
            buf.extend_from_slice(report.to_json()?.as_bytes());
            buf.push(b'\n');
        }
        "csv" => report.write_csv(&mut buf)?,
        other => bail!("unknown format {other:?}; expected json or csv"),
    }
    match &report.config.out {
        Some(path) => std::fs::write(path, &buf).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(&buf)?,
    }
    Ok(())
}

/// Rejects an unknown output format before any work is done.
pub fn check_format(cfg: &Settings) -> Result<()> {
    match cfg.format.as_deref() {
        None | Some("json") | Some("csv") => Ok(()),
        Some(other) => bail!("unknown format {other:?}; expected json or csv"),
    }
}
