mod commands;
mod config;
mod error;
mod report;

use clap::Parser;
use config::RunConfig;
use std::process::ExitCode;

/// Exit codes: 0 all identities hold, 1 an identity failed, 2 input error.
fn run(cfg: RunConfig) -> ExitCode {
    let report = match commands::dispatch(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("asai {}: {e}", cfg.command.name());
            return ExitCode::from(2);
        }
    };
    if let Err(e) = report::emit_report(&report, cfg.format, cfg.out.as_deref()) {
        eprintln!("asai {}: {e}", cfg.command.name());
        return ExitCode::from(2);
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        eprintln!("asai {}: identity check failed", cfg.command.name());
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    run(RunConfig::parse())
}
