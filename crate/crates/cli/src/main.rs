mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::report::{write_text, RunReport};

#[derive(Debug, Parser)]
#[command(name = "dyndeg", version, about = "Degrees and dynamical degrees of rational maps")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Master seed for every random choice.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Independent (prime, line) samples for the degree oracle.
    #[arg(long, global = true, default_value_t = 3)]
    pub trials: usize,
    /// Width of certified brackets.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol: f64,
    /// Report path; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Degree sequence as CSV.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Comma-separated primes replacing the seeded table, for replaying a report.
    #[arg(long, global = true, value_delimiter = ',')]
    pub primes: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StrategyArg {
    Auto,
    Pullback,
    Sampling,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum WhichArg {
    #[value(name = "J")]
    J,
    #[value(name = "I")]
    I,
    #[value(name = "K")]
    K,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Auto,
    Symbolic,
    Oracle,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SubspaceArg {
    Symmetric,
    Cyclic,
    SymmetricCyclic,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degree sequence of the map in a spec file.
    Degseq {
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
    },
    /// Projectivization, degree matrices and dynamical degrees of a monomial map.
    Monomial {
        /// JSON matrix, inline or as a file path.
        #[arg(long)]
        matrix: String,
        /// Every `deg_p` matrix instead of `p = 1` only.
        #[arg(long)]
        all_degrees: bool,
    },
    /// Entrywise inversion, matrix inversion and their composite.
    Matinv {
        #[arg(long)]
        q: usize,
        #[arg(long, value_enum, ignore_case = true)]
        which: WhichArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
        /// Oracle iterates.
        #[arg(long, default_value_t = 5)]
        n: usize,
        /// Restrict oracle lines to a linear subspace of matrices.
        #[arg(long, value_enum)]
        subspace: Option<SubspaceArg>,
    },
    /// The family `(x, y) -> (y, (y + a) / (x + b))`.
    Fab {
        #[command(subcommand)]
        command: FabCommand,
    },
    /// Irrationality certificate for the spectral radius of a unimodular matrix.
    Certify {
        #[arg(long)]
        matrix: String,
    },
    /// Exact characteristic polynomial.
    Charpoly {
        #[arg(long)]
        matrix: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum FabCommand {
    /// `χ_n` and its agreement with the pullback matrix.
    Chi {
        #[arg(long)]
        n: usize,
    },
    /// Certified largest root of `χ_n`.
    Lambda {
        #[arg(long)]
        n: usize,
    },
    /// Parameters on `V_n`.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        /// Also list points over this small prime.
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Oracle degrees of `f_{a,b}` over a prime field.
    Degseq {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 10)]
        n: usize,
        /// Orbit length for the Picard prediction; `f_X` when absent.
        #[arg(long)]
        orbit: Option<usize>,
    },
}

/// Failure classes with their exit codes.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Compute(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Compute(_) => 3,
        }
    }
}

/// What a command hands back for the report.
pub struct Outcome {
    pub input: Vec<u8>,
    pub primes: Vec<u64>,
    pub results: serde_json::Value,
    pub csv: Option<String>,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let start = Instant::now();
    let outcome = match commands::run(&cli) {
        Ok(o) => o,
        Err(e) => {
            let (CliError::Input(msg) | CliError::Compute(msg)) = &e;
            eprintln!("error: {msg}");
            return ExitCode::from(e.code());
        }
    };
    let report = RunReport {
        command: argv.iter().skip(1).cloned().collect(),
        input_sha256: report::sha256_hex(&outcome.input),
        seed: cli.global.seed,
        primes: outcome.primes.iter().map(u64::to_string).collect(),
        results: outcome.results,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    let written = match &cli.global.out {
        Some(p) => write_text(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    let written = written.and_then(|_| match (&cli.global.csv, &outcome.csv) {
        (Some(p), Some(csv)) => write_text(p, csv),
        _ => Ok(()),
    });
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(2);
    }
    if cli.global.csv.is_some() && outcome.csv.is_none() {
        eprintln!("warning: --csv applies only to commands that produce a degree sequence");
    }
    ExitCode::SUCCESS
}
