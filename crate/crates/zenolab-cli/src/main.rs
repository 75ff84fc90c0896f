//! `zenolab` — build and evolve decay+drift Lindbladians, measure their
//! convergence, evaluate the closed-form bounds, and fit the tomography
//! noise model. Every artifact is byte-stable given the same seed and flags,
//! independent of thread count.

mod commands;
mod io;

use clap::{Parser, Subcommand};

const DEFAULT_SEED: u64 = 0x5eed_2024;

#[derive(Parser)]
#[command(name = "zenolab", version, about = "decay+drift quantum Markov semigroup toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a model over a time grid and emit (t, metric, value) CSV.
    Simulate(commands::SimulateArgs),
    /// Sweep a parameter axis and emit bracketed metric rows.
    Sweep(commands::SweepArgs),
    /// Initial entropy deficits D0 - D_t over a time grid.
    Deficit(commands::DeficitArgs),
    /// Numeric inequality verifiers.
    Verify(commands::VerifyArgs),
    /// Closed-form bound evaluators (JSON reports; CSV batch mode).
    Bound(commands::BoundArgs),
    /// Fit the five-parameter noise model to a Choi matrix.
    Fit(commands::FitArgs),
}

fn main() {
    // honor the worker cap before any parallel work starts
    if let Ok(v) = std::env::var("ZENOLAB_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => commands::run_simulate(a),
        Command::Sweep(a) => commands::run_sweep(a),
        Command::Deficit(a) => commands::run_deficit(a),
        Command::Verify(a) => commands::run_verify(a),
        Command::Bound(a) => commands::run_bound(a),
        Command::Fit(a) => commands::run_fit(a),
    };
    if let Err(e) = result {
        eprintln!("{}", e.to_stderr_json());
        std::process::exit(e.exit_code());
    }
}

/// CLI-level error carrying the intended exit code.
pub struct CliError {
    pub message: String,
    pub code: i32,
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError { message: msg.into(), code: 2 }
    }

    pub fn runtime(msg: impl Into<String>) -> Self {
        CliError { message: msg.into(), code: 1 }
    }

    pub fn to_stderr_json(&self) -> String {
        serde_json::json!({"error": self.message, "code": self.code}).to_string()
    }

    pub fn exit_code(&self) -> i32 {
        self.code
    }
}

impl From<zenolab::Error> for CliError {
    fn from(e: zenolab::Error) -> Self {
        CliError::runtime(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::runtime(format!("io: {e}"))
    }
}
