//! `wlnet`: graph comparison, corpus checks, network demos, training and
//! benchmarks.
//!
//! Exit codes: 0 success (or indistinguishable), 1 distinguished (or a failed
//! check), 2 usage or input error, 3 numeric failure.

mod commands;
mod input;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

pub const EXIT_DISTINGUISHED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "wlnet", version, about = "Weisfeiler-Lehman refinement and matrix-product graph networks")]
pub struct Cli {
    /// Worker threads for intra-operation parallelism.
    #[arg(long, global = true, env = "WLNET_THREADS")]
    pub threads: Option<usize>,
    /// Seed for every random choice the command makes.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare two graphs with a refinement algorithm; prints the verdict as JSON.
    Compare(commands::CompareArgs),
    /// Run algorithms over a corpus of graph pairs; writes one CSV row per pair and algorithm.
    Corpus(commands::CorpusArgs),
    /// Closed 3-walk counts from the adjacency cube and from the hand-set network.
    Triangles(commands::TrianglesArgs),
    /// Train on the cycle-union dataset; writes the history CSV and parameters.
    Train(commands::TrainArgs),
    /// Time the per-channel matrix product over a range of sizes.
    Bench(commands::BenchArgs),
}

/// An error with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn usage(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: EXIT_USAGE,
            error: error.into(),
        }
    }

    pub fn numeric(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: EXIT_NUMERIC,
            error: error.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let threads = rayon::current_num_threads();
    let result = match &cli.command {
        Command::Compare(a) => commands::compare(a, cli.seed, threads),
        Command::Corpus(a) => commands::corpus(a, cli.seed, threads),
        Command::Triangles(a) => commands::triangles(a, cli.seed, threads),
        Command::Train(a) => commands::train(a, cli.seed, threads),
        Command::Bench(a) => commands::bench(a, cli.seed, threads),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
