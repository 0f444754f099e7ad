//! `surfrig`: sparsity checks, reduction certificates, random generation and
//! surface rigidity analysis from the command line.
//!
//! JSON goes to stdout (or `--out`), a one-line summary to stderr. Exit codes:
//! 0 for an affirmative verdict, 1 for a negative one, 2 for usage or input
//! errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser)]
#[command(
    name = "surfrig",
    version,
    about = "Rigidity of frameworks on algebraic surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide (2,k)-sparsity and tightness of a graph.
    Check {
        /// Graph JSON file, or `-` for stdin.
        graph: PathBuf,
        #[arg(long)]
        k: u8,
        #[command(flatten)]
        out: Output,
    },
    /// Reduce a (2,k)-tight graph to its base and print the certificate.
    Reduce {
        graph: PathBuf,
        #[arg(long)]
        k: u8,
        /// Replay the certificate and compare with the input.
        #[arg(long)]
        replay_check: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Grow a random (2,k)-tight graph with its certificate.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u8,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Rank of the surface rigidity matrix and the rigidity verdict.
    Rigidity {
        graph: PathBuf,
        /// `name[:key=value,...]` or an inline JSON polynomial.
        #[arg(long)]
        surface: String,
        /// Random placements to try; the first full-rank one ends the search.
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Surface type; defaults to the declared type of the surface.
        #[arg(long)]
        k: Option<u8>,
        /// JSON array of points; required for surfaces without a sampler.
        #[arg(long)]
        placement: Option<PathBuf>,
        /// Use floating-point rank; the verdict is then never certified.
        #[arg(long)]
        float: bool,
        #[arg(long, value_enum)]
        expect: Option<Expect>,
        #[command(flatten)]
        out: Output,
    },
    /// Estimate the freedom number of a surface.
    Type {
        #[arg(long)]
        surface: String,
        /// Placements per complete graph.
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Generate, reduce and analyze a batch of random tight graphs.
    Verify {
        /// Largest vertex count; sizes are drawn between the base size and this.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u8,
        #[arg(long)]
        surface: String,
        /// Number of graphs.
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Expect::Isostatic)]
        expect: Expect,
        #[arg(long)]
        float: bool,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct Output {
    /// Write JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    Isostatic,
    Dependent,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
