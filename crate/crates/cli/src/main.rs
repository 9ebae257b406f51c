//! `jbarrier`: command-line front end for the barrier option pricer.
//!
//! Exit codes: 0 success, 1 a table row or criterion failed, 2 invalid
//! input, 3 numerical failure, 4 file I/O.

mod commands;
mod config;
mod report;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command};

#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Numerical(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Numerical(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Numerical(m) | Failure::Io(m) => m,
        }
    }
}

impl From<jacobi_barrier::Error> for Failure {
    fn from(e: jacobi_barrier::Error) -> Self {
        if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Numerical(e.to_string())
        }
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let settings = cli.settings.resolve()?;
    let outcome = match &cli.command {
        Command::Price => commands::price(&settings)?,
        Command::Curve { spots, points } => commands::curve(&settings, spots, *points)?,
        Command::Table { id } => commands::table(*id)?,
        Command::Converge { min_nodes, max_nodes, step, reference, points } => {
            commands::converge(&settings, *min_nodes, *max_nodes, *step, reference, *points)?
        }
        Command::Timing { dates_list, runs } => commands::timing(&settings, dates_list, *runs)?,
        Command::Mc => commands::mc(&settings)?,
    };
    let text = outcome.report.render(settings.format());
    match &settings.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
            let verdict = if outcome.ok { "ok" } else { "FAILED" };
            eprintln!("{}: wrote {} ({verdict})", outcome.report.title, path.display());
        }
        None => print!("{text}"),
    }
    Ok(outcome.ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
