//! `gravwave` experiment driver.
//!
//! Exit codes: 0 on success, 1 on configuration or I/O errors, 2 when a
//! trajectory blows up, 3 when the extension solver fails to converge.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use gravwave::Error;

use commands::Command;
use config::ExperimentConfig;

#[derive(Parser, Debug)]
#[command(name = "gravwave", version, about = "Gravity water wave experiments on the square torus")]
struct Args {
    /// Experiment to run.
    #[arg(value_enum)]
    command: Command,
    /// Configuration file with `section.key = value` lines.
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created when missing.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

fn threads() -> Result<(), String> {
    let Ok(v) = std::env::var("GRAVWAVE_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| format!("GRAVWAVE_THREADS: expected a positive integer, got `{v}`"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| format!("GRAVWAVE_THREADS: {e}"))
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Err(e) = threads() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.config.display());
            return ExitCode::from(1);
        }
    };
    let cfg: ExperimentConfig = match text.parse() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match commands::run(args.command, &cfg, &args.out) {
        Ok(report) => {
            for line in &report.lines {
                println!("{}: {line}", args.command.name());
            }
            ExitCode::from(if report.blowup { 2 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::BlowUp { .. } | Error::SteepSurface(_) => 2,
                Error::DtnNonConvergence { .. } => 3,
                _ => 1,
            })
        }
    }
}
