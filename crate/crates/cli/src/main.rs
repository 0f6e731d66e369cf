//! `billiards`: build the table, verify the trajectory family, search for
//! evading trajectories, and draw figures.
//!
//! Exit status: 0 success, 1 verification failure, 2 invalid input,
//! 3 evasion budget exhausted.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn run(cli: Cli) -> Result<(), commands::CliError> {
    match cli.command {
        Command::Build { table, out } => commands::build(&table, &out),
        Command::Verify {
            table,
            out,
            n,
            jobs,
            table_file,
        } => commands::verify(&table, &out, n, jobs, table_file.as_deref()),
        Command::Evade {
            table,
            out,
            blockers,
            random,
            n_max,
        } => commands::evade_cmd(&table, &out, blockers.as_deref(), random, n_max),
        Command::Render { table, out, what, index } => commands::render(&table, &out, what, index),
        Command::Report {
            table,
            out,
            n,
            blockers,
            jobs,
        } => commands::report(&table, &out, n, blockers.as_deref(), jobs),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("billiards: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
