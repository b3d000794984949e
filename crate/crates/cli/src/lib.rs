//! `entdist`: batch front end for the entanglement-distance toolkit.

pub mod commands;
pub mod error;
pub mod io;
pub mod sweep;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use error::{CliError, CliResult};
use sweep::{Family, Output};

#[derive(Debug, Parser)]
#[command(name = "entdist", version, about = "Entanglement distance of multi-qudit states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report (or CSV) here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Machine-readable JSON report.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Normalization tolerance for input files; residual threshold for `check`.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entanglement measure of a pure state file.
    Measure { file: PathBuf },
    /// Evaluate a family over a parameter grid and write CSV.
    Sweep(SweepArgs),
    /// Entanglement metric of a qubit state file.
    Em {
        file: PathBuf,
        /// One unit 3-vector per qubit, e.g. "-1,0,0;0,0,1;1,0,0".
        #[arg(long, allow_hyphen_values = true)]
        directions: Option<String>,
    },
    /// Convex-roof upper bound for a density matrix file.
    Mixed(MixedArgs),
    /// Self-test of the generator identities and local-unitary invariance.
    Check {
        /// Corrupts one generator so the self-test must fail.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Number of subsystems; a comma-separated list sweeps several sizes.
    #[arg(long, value_delimiter = ',')]
    pub m: Vec<usize>,
    /// Grid axis `name:start:stop:count`; at most two.
    #[arg(long = "axis", required = true)]
    pub axes: Vec<String>,
    #[arg(long, value_enum, value_delimiter = ',', default_values = ["E", "E_per_M"])]
    pub outputs: Vec<Output>,
    #[arg(long = "phi-over-2pi", allow_negative_numbers = true)]
    pub phi_over_2pi: Option<f64>,
    #[arg(long = "theta-over-pi", allow_negative_numbers = true)]
    pub theta_over_pi: Option<f64>,
    #[arg(long = "phase-over-pi", allow_negative_numbers = true)]
    pub phase_over_pi: Option<f64>,
    #[arg(long = "gamma-over-pi", allow_negative_numbers = true)]
    pub gamma_over_pi: Option<f64>,
    #[arg(long = "tau-over-pi", allow_negative_numbers = true)]
    pub tau_over_pi: Option<f64>,
    #[arg(long = "phi-over-pi", allow_negative_numbers = true)]
    pub phi_over_pi: Option<f64>,
}

#[derive(Debug, Args)]
pub struct MixedArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    #[arg(long, default_value_t = 500)]
    pub max_iters: usize,
    /// Ensemble length; defaults to max(rank², 4).
    #[arg(long)]
    pub ensemble_len: Option<usize>,
}

/// Report text plus the exit code it should end with.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub warnings: Vec<String>,
    pub code: i32,
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    commands::dispatch(cli)
}
