use std::process::ExitCode;

use clap::Parser;
use liouwave_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    // Single-threaded unless asked otherwise, so runs are bit-reproducible by default.
    let threads = std::env::var("LIOUWAVE_THREADS").ok().and_then(|s| s.parse().ok()).unwrap_or(1);
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    ExitCode::from(run(&cli))
}
