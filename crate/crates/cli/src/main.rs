//! Batch front end for the algebroid verification engine: reads a TOML
//! job configuration, builds every named object, runs the jobs in order,
//! and writes a human report plus machine-readable results.

mod config;
mod registry;
mod run;

use clap::Parser;
use std::path::PathBuf;

/// Exact verification jobs for Hopf algebroids, Morita base change, and
/// Hochschild and cyclic (co)homology.
#[derive(Debug, Parser)]
#[command(name = "algebroid", version)]
struct Cli {
    /// TOML job configuration.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Directory for report.txt, summary.json, and per-job results.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Override the degree cap of every job.
    #[arg(long, value_name = "N")]
    cap: Option<usize>,
    /// Run independent jobs concurrently; outputs are identical either way.
    #[arg(long)]
    parallel: bool,
    /// Cap on the ambient dimension of any single constructed space.
    #[arg(long, value_name = "N")]
    size_limit: Option<usize>,
}

fn main() {
    let cli = Cli::parse();
    let code = run::run(
        &cli.config,
        &cli.out,
        cli.cap,
        cli.parallel,
        cli.size_limit,
    );
    std::process::exit(code);
}
