mod args;
mod cli;
mod commands;
mod error;
mod io;

use std::process::ExitCode;

use ccrlab::ToleranceConfig;
use clap::error::ErrorKind;
use clap::Parser;

use crate::cli::{Cli, Command};
use crate::error::CliError;

fn tolerances() -> Result<ToleranceConfig, CliError> {
    match std::env::var("CCRLAB_TOL") {
        Ok(spec) => Ok(ToleranceConfig::default().with_overrides(&spec)?),
        Err(std::env::VarError::NotPresent) => Ok(ToleranceConfig::default()),
        Err(e) => Err(CliError::Format(format!("CCRLAB_TOL: {e}"))),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let tol = tolerances()?;
    match &cli.command {
        Command::Build(a) => commands::build(a, &tol),
        Command::Classify(a) => commands::classify_cmd(a, &tol),
        Command::Clock(a) => commands::clock(a, &tol),
        Command::Factorize(a) => commands::factorize_cmd(a, &tol),
        Command::InvariantSet(a) => commands::invariant_cmd(a, &tol),
        Command::Audit(a) => commands::audit(a, &tol),
        Command::Catalog3d(a) => commands::catalog(a, &tol),
    }
}

fn main() -> ExitCode {
    // Usage errors exit 1; clap's own code 2 is reserved for constraint violations.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
