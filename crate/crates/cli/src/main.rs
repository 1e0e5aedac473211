use std::process::ExitCode;

use clap::Parser;

use zs_toda::{check_format, emit, resolve, run, Cli, EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = resolve(&cli).and_then(|cfg| check_format(&cfg)).and_then(|_| run(&cli));
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    if let Err(e) = emit(&report) {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_USAGE);
    }
    eprintln!("{}: {} of {} records pass", report.command, report.passed(), report.records.len());
    ExitCode::from(if report.all_pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}
