//! `lexmeta`: command-line front end over the lexical models.
//!
//! Exit status: 0 when every input was read and no finding reached error
//! severity, 1 when some finding is an error or a projection precondition
//! failed, 2 on unreadable input, fatal parse failure or usage error.

mod args;
mod commands;
mod inputs;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Status;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match cli.command {
        Command::Validate(a) => commands::validate(&a),
        Command::Convert(a) => commands::convert(&a),
        Command::Query(a) => commands::query(&a),
        Command::Stats(a) => commands::stats(&a),
    };
    match status {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("lexmeta: {e:#}");
            ExitCode::from(Status::Fatal as u8)
        }
    }
}
