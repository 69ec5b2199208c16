//! `cpm`: Laplace-Beltrami spectra with the closest point method.
//!
//! Exit status is 0 on success, 2 for configuration errors and 3 for
//! numerical failures.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cpm_core::CpmError;

#[derive(Parser)]
#[command(name = "cpm", version, about = "Surface eigenvalue problems with the closest point method")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Configuration file of `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Override one configuration key; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Eigenvalues at one grid spacing, with a histogram of their real parts.
    Spectrum,
    /// Convergence study against the analytic spectrum.
    Converge,
    /// Eigenfunctions sampled on the surface, one point-cloud file per mode.
    Modes,
    /// Matrix sizes and 2-norm condition numbers over `dx_list`.
    Cond,
    /// Spectra of the stabilized and unstabilized operators side by side.
    CompareUnstab,
}

fn exit_code(e: &CpmError) -> u8 {
    match e {
        CpmError::Config(_) | CpmError::Parse(_) | CpmError::Domain(_) | CpmError::Io(_) => 2,
        CpmError::Numeric(_) | CpmError::Resource(_) | CpmError::Internal(_) => 3,
    }
}

fn threads() -> Result<(), CpmError> {
    let Ok(v) = std::env::var("CPM_THREADS") else { return Ok(()) };
    let n: usize = v
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CpmError::Config(format!("CPM_THREADS must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CpmError::Internal(format!("thread pool: {e}")))
}

fn run(cli: &Cli) -> Result<(), CpmError> {
    threads()?;
    let config = config::load(cli.config.as_deref(), &cli.overrides)?;
    std::fs::create_dir_all(&cli.out)
        .map_err(|e| CpmError::Config(format!("cannot create output directory {}: {e}", cli.out.display())))?;
    let ctx = commands::Context { config, out: &cli.out, quiet: cli.quiet };
    match cli.command {
        Command::Spectrum => commands::spectrum(&ctx),
        Command::Converge => commands::converge(&ctx),
        Command::Modes => commands::modes(&ctx),
        Command::Cond => commands::cond(&ctx),
        Command::CompareUnstab => commands::compare_unstab(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cpm: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
