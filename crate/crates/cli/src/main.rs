//! Benchmark harness: dataset generation, experiment runs, reference
//! optimum computation, and Moreau/error-bound diagnostics.

mod commands;
mod config;
mod csvout;
mod points;
mod problem;

use clap::{Parser, Subcommand};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "rcs",
    version,
    about = "Randomized coordinate subgradient toolkit for nonsmooth composite optimization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate synthetic datasets (binary container + JSON sidecar).
    Datagen(commands::datagen::DatagenArgs),
    /// Estimate a reference optimum for gap reporting.
    Reference(Box<commands::reference::ReferenceArgs>),
    /// Run a solver experiment, writing a trace CSV and a summary JSON.
    Run(Box<commands::run::RunArgs>),
    /// Envelope-gradient and error-bound diagnostics along saved iterates.
    Diagnose(Box<commands::diagnose::DiagnoseArgs>),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Datagen(args) => commands::datagen::run(args),
        Command::Reference(args) => commands::reference::run(*args),
        Command::Run(args) => commands::run::run(*args),
        Command::Diagnose(args) => commands::diagnose::run(*args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            // Divergence gets its own exit code so sweeps can tell a bad
            // step constant from an IO or configuration problem.
            let diverged = err
                .chain()
                .any(|c| matches!(c.downcast_ref(), Some(rcs_core::Error::Diverged { .. })));
            if diverged {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
