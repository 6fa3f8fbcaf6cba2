//! Command-line front end: JSON configs in, CSV series and JSON summaries out.
//!
//! Exit codes: 0 success, 1 I/O or check failure, 2 blow-up flag raised,
//! 3 bad configuration.

pub mod commands;
pub mod config;
pub mod output;
pub mod recipes;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::Context;
use config::Equation;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] liouwave::Error),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Core(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "liouwave", version, about = "Wave equations on the sphere and the plane")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON config (missing keys take defaults)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Overrides the config seed
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Clone, Copy, Debug, Subcommand)]
pub enum Command {
    /// Scalar equation on S^2
    Liouville,
    /// Coupled system on S^2
    System,
    /// Wave CMC equation on a periodic box
    Cmc,
    /// Ground-state identities, degree quantization and the Sobolev sweep
    Groundstate,
    /// Lambda_J table and global-existence checklist for a spec file
    Lambda,
    /// Moser-Trudinger slack floors over a test family
    MtCheck,
}

/// Runs the parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> u8 {
    let config = match &cli.config {
        Some(p) => match std::fs::read_to_string(p) {
            Ok(s) => Some(s),
            Err(e) => {
                eprintln!("error: {}: {e}", p.display());
                return 1;
            }
        },
        None => None,
    };
    let ctx = Context { config, out: cli.out.clone(), seed: cli.seed, quiet: cli.quiet };
    let result = match cli.command {
        Command::Liouville => commands::cmd_sphere(&ctx, Equation::LiouvilleScalar),
        Command::System => commands::cmd_sphere(&ctx, Equation::LiouvilleSystem),
        Command::Cmc => commands::cmd_cmc(&ctx),
        Command::Groundstate => commands::cmd_groundstate(&ctx),
        Command::Lambda => commands::cmd_lambda(&ctx),
        Command::MtCheck => commands::cmd_mt_check(&ctx),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
