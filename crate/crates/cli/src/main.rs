//! `orbeq`: validate potentials, count and export ansatz systems, compute
//! quantum dimensions, verify factorizations and search for orbifold
//! equivalences.
//!
//! Exit codes: 0 success or consistent system found, 1 search exhausted or
//! verification failed, 2 input error, 3 resource limits prevented a verdict
//! on every candidate.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use orbeq_cli::{commands, SideArg};

#[derive(Parser)]
#[command(name = "orbeq", version, about = "Orbifold equivalence of quasi-homogeneous potentials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degree, weights, Jacobian dimension and central charge of both sides.
    Validate { problem: PathBuf },
    /// Parameter and equation counts of the problem's ansatz with helpers.
    Stats {
        problem: PathBuf,
        /// Use both products instead of `sharp · flat` only.
        #[arg(long)]
        full: bool,
        /// Also print degrees, term counts and density.
        #[arg(long)]
        detail: bool,
    },
    /// Quantum dimensions of the factorization in a matrix file.
    Qdim {
        problem: PathBuf,
        matrix: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        side: SideArg,
        /// Parameter names allowed in the matrix entries, comma separated.
        #[arg(long, value_delimiter = ',')]
        params: Vec<String>,
    },
    /// Bounded search: the problem's single ansatz if it has one (or a seed),
    /// otherwise every ansatz up to the rank and shift bounds.
    Search(commands::SearchArgs),
    /// Checks the factorization identity, gradings and quantum dimensions.
    Verify {
        problem: PathBuf,
        matrix: PathBuf,
        #[arg(long, value_delimiter = ',')]
        params: Vec<String>,
        /// Polynomial to factor instead of `f − g`.
        #[arg(long)]
        target: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { problem } => commands::validate(&problem),
        Command::Stats { problem, full, detail } => commands::stats(&problem, full, detail),
        Command::Qdim { problem, matrix, side, params } => commands::qdim(&problem, &matrix, side, &params),
        Command::Search(args) => commands::search(&args),
        Command::Verify { problem, matrix, params, target } => commands::verify(&problem, &matrix, &params, target.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
