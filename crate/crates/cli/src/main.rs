//! `wreathdim`: batch runner for growth, word-length, control and cube
//! experiments, plus the full verification suite.

mod report;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wreathdim::config::Format;

const EXAMPLE_CONFIG: &str = include_str!("../configs/example.toml");

#[derive(Parser, Debug)]
#[command(
    name = "wreathdim",
    version,
    about = "Word metrics and dimension control on wreath products"
)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Experiment config; the bundled example when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Ball cache directory.
    #[arg(long, global = true, env = "WREATHDIM_CACHE")]
    cache_dir: Option<PathBuf>,
    /// Report file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format: json or csv.
    #[arg(long, global = true, value_parser = parse_format)]
    format: Option<Format>,
    /// Seed for sampled and randomized checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// BFS worker threads.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Maximum states visited by a single search.
    #[arg(long, global = true)]
    budget: Option<usize>,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: wreathdim::Error| e.to_string())
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Growth tables γ(r).
    Growth,
    /// Word lengths of the listed elements.
    Length,
    /// r-component diameters on a window.
    Components,
    /// Predicted against measured control functions.
    Control,
    /// Kernel cube certificates.
    Cube,
    /// Lattice covering search.
    Lattice,
    /// The full verification suite.
    Verify {
        /// Run only these checks (repeatable). `--list` prints the ids.
        #[arg(long = "check")]
        checks: Vec<String>,
        #[arg(long)]
        list: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::run(&cli.command, &cli.opts, EXAMPLE_CONFIG) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", report::error_report(&e));
            ExitCode::from(2)
        }
    }
}
