mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Exit statuses: 2 for bad input, 3 when an iterative solver runs out of
/// budget, 1 for I/O trouble.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(jdr_core::Error),
    Io(std::io::Error),
}

impl From<jdr_core::Error> for CliError {
    fn from(e: jdr_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Limits(a) => commands::limits(a),
        Command::Tradeoff(a) => commands::tradeoff(a),
        Command::Superchannel(a) => commands::superchannel(a),
        Command::Ber(a) => commands::ber(a),
        Command::Link(a) => commands::link(a),
        Command::Codebook(a) => commands::codebook(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_convergence_failure() { 3 } else { 2 })
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
