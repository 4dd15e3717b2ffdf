mod args;
mod commands;
mod config;

use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;
use config::RunConfig;

const EXIT_VALIDATION: u8 = 1;
const EXIT_RUNTIME: u8 = 2;

/// Reads `PAIRCORR_THREADS`; unset or `0` leaves rayon's default.
fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("PAIRCORR_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("PAIRCORR_THREADS must be a non-negative integer, got {raw:?}"))?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_VALIDATION),
            };
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_VALIDATION);
    }
    let cfg = match RunConfig::resolve(cli.command, &cli.opts) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_VALIDATION);
        }
    };
    let bytes = match commands::run(&cfg) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(if e.is_input_error() {
                EXIT_VALIDATION
            } else {
                EXIT_RUNTIME
            });
        }
    };
    let written = match &cfg.output {
        Some(path) => fs::write(path, &bytes),
        None => io::stdout().lock().write_all(&bytes),
    };
    if let Err(e) = written {
        eprintln!("error: writing output: {e}");
        return ExitCode::from(EXIT_RUNTIME);
    }
    ExitCode::SUCCESS
}
