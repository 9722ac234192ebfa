//! `qnc`: analytic curves, enumeration, thresholds, Monte Carlo sweeps and
//! circuit dumps as CSV or JSON.

mod args;
mod commands;
mod error;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Format, OUT_DIR_ENV};
use error::CliError;

fn target(cli: &Cli, command: &str) -> Option<PathBuf> {
    let dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
    match (&cli.out, dir) {
        (Some(p), Some(d)) if p.is_relative() => Some(d.join(p)),
        (Some(p), _) => Some(p.clone()),
        (None, Some(d)) => {
            let ext = match (cli.format, command) {
                (Format::Json, _) => "json",
                (Format::Csv, "circuit") => "txt",
                (Format::Csv, _) => "csv",
            };
            Some(d.join(format!("{command}.{ext}")))
        }
        (None, None) => None,
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let config = serde_json::to_value(cli).map_err(CliError::runtime)?;
    let (name, bytes) = match &cli.command {
        Command::Analytic(a) => ("analytic", commands::analytic(a, config)?.render(cli.format)?),
        Command::Correlate(a) => ("correlate", commands::correlate(a, config)?.render(cli.format)?),
        Command::Threshold(a) => ("threshold", commands::threshold(a, config)?.render(cli.format)?),
        Command::Enumerate(a) => ("enumerate", commands::enumerate(a, config)?.render(cli.format)?),
        Command::Mc(a) => ("mc", commands::mc(a, config)?.render(cli.format)?),
        Command::Sweep(a) => ("sweep", commands::sweep(a, config)?.render(cli.format)?),
        Command::Circuit(a) => ("circuit", commands::circuit(a, config, cli.format)?),
    };
    match target(cli, name) {
        Some(path) => {
            if cli.out.is_none() {
                if let Some(dir) = path.parent() {
                    std::fs::create_dir_all(dir).map_err(|source| CliError::Write { path: dir.into(), source })?;
                }
            }
            std::fs::write(&path, &bytes).map_err(|source| CliError::Write { path: path.clone(), source })?;
            eprintln!("wrote {}", path.display());
        }
        None => std::io::stdout().write_all(&bytes).map_err(CliError::runtime)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            eprintln!("{}", CliError::Usage(first.to_string()).line());
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.line());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
