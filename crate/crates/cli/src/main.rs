//! `hopfion`: build exact multi-field toroidal soliton configurations,
//! verify them by independent numerical routes, sweep parameter grids and
//! export fields for visualisation.

mod config;
mod export;
mod solve;
mod sweep;
mod verify;
mod vtk;

use clap::{Parser, Subcommand};

#[derive(Debug)]
pub enum CliError {
    /// Invalid parameters or configuration: exit code 2.
    Config(String),
    /// Failure while computing or writing results: exit code 1.
    Runtime(String),
    /// One or more verification checks failed: exit code 1.
    ChecksFailed(usize),
}

impl From<hopfion_core::Error> for CliError {
    fn from(e: hopfion_core::Error) -> Self {
        use hopfion_core::Error::*;
        match e {
            ScalingCondition { .. }
            | ZeroWinding { .. }
            | ShapeMismatch { .. }
            | InvalidScale { .. }
            | UnsupportedBranch { .. }
            | NonConstantRatio
            | InvalidProfile { .. }
            | Config(_) => CliError::Config(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "hopfion",
    version,
    about = "Exact toroidal hopfions of scale-invariant O(3)^N sigma models: solve, verify, sweep, export"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a solution and report its constants and boundary checks
    Solve(solve::SolveArgs),
    /// Run the verification suite against a solution
    Verify(verify::VerifyArgs),
    /// Evaluate a grid of parameter sets into a CSV table
    Sweep(sweep::SweepArgs),
    /// Export fields on a Cartesian box (legacy VTK, optional CSV)
    Export(export::ExportArgs),
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => solve::run(&args),
        Command::Verify(args) => verify::run(&args),
        Command::Sweep(args) => sweep::run(&args),
        Command::Export(args) => export::run(&args),
    };
    match result {
        Ok(()) => {}
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(1);
        }
        Err(CliError::ChecksFailed(count)) => {
            eprintln!("error: {count} verification check(s) failed");
            std::process::exit(1);
        }
    }
}
