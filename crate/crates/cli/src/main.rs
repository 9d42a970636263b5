//! Command-line front end: exact single values, verification suites over
//! parameter grids, conjecture evidence sweeps, and the Bernoulli cache.
//!
//! Exit codes: 0 all checks passed / value computed; 1 verification
//! failure (or conjecture disagreement under --strict-conjectures, or a
//! corrupt cache); 2 usage or parameter error; 3 resource limit hit.

mod cachefile;
mod commands;
mod grid;
mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

#[derive(Error, Debug)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] stirling_padic::Error),

    #[error("{0}")]
    Usage(String),

    #[error("{path}: line {line}: {reason}")]
    CacheFile {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(stirling_padic::Error::Parameter(_)) => 2,
            CliError::Core(stirling_padic::Error::Resource(_)) => 3,
            CliError::Core(stirling_padic::Error::Cache { .. }) => 1,
            CliError::Usage(_) => 2,
            CliError::CacheFile { .. } => 1,
            CliError::Io(_) | CliError::Csv(_) => 1,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "stirling-padic",
    version,
    about = "Exact p-adic valuations of Stirling numbers of the first kind, \
             with verification suites and conjecture sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one value exactly and print it
    Compute {
        #[command(subcommand)]
        kind: ComputeKind,
        /// Bernoulli cache file (overrides STIRLING_PADIC_CACHE)
        #[arg(long, global = true)]
        cache: Option<PathBuf>,
    },
    /// Run a verification suite over a parameter grid
    Verify {
        suite: Suite,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate the conjectures over a grid and report the evidence
    Sweep {
        #[command(flatten)]
        grid: GridArgs,
        /// Conjectures to evaluate (comma separated subset of 1,2,3)
        #[arg(long = "conj", value_delimiter = ',', default_values_t = vec![1u8, 2, 3])]
        conjectures: Vec<u8>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Manage the Bernoulli number cache file
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum ComputeKind {
    /// s(n,k), the unsigned Stirling number of the first kind
    Stirling {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: i64,
    },
    /// s_m(n,k), the m-shifted Stirling number
    Mstirling {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: i64,
    },
    /// v_p(s(n,k)) via the modular engine ("inf" for zero entries)
    Valuation {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        p: u64,
    },
    /// H_n^(r), the generalized harmonic number
    Harmonic {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
    },
    /// H(n,k), the elementary symmetric function of 1, 1/2, ..., 1/n
    Elemsym {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
    },
    /// B_n, the Bernoulli number
    Bernoulli {
        #[arg(long)]
        n: u64,
    },
    /// Regularity of p, with the offending Bernoulli indices if irregular
    Regular {
        #[arg(long)]
        p: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Theorem1,
    Theorem2,
    EvenStep,
    OddStep,
    Boyd,
    Washington,
    Symmetric,
    Prow,
    Shifted,
    Corollary13,
    All,
}

#[derive(Args)]
struct GridArgs {
    /// Primes: single value or inclusive range "lo..hi"
    #[arg(long)]
    p: String,
    /// Multipliers a: value, range "lo..hi", or "max" (= p-1 per prime);
    /// default: all of [1, p-1]
    #[arg(long)]
    a: Option<String>,
    /// Exponents n: value or range
    #[arg(long)]
    n: Option<String>,
    /// Exponents m (sweeps only): value or range; default m = n
    #[arg(long)]
    m: Option<String>,
    /// k values: value or range
    #[arg(long)]
    k: Option<String>,
    /// Largest n for the harmonic congruence suite (default 30)
    #[arg(long)]
    nmax: Option<u64>,
    /// Worker threads (default: logical CPU count)
    #[arg(long)]
    jobs: Option<usize>,
    /// Bernoulli cache file (overrides STIRLING_PADIC_CACHE)
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Count conjecture disagreements in the exit code
    #[arg(long)]
    strict_conjectures: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the report to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand)]
enum CacheAction {
    /// Precompute Bernoulli numbers up to an even index and store them
    Build {
        #[arg(long, default_value_t = 200)]
        max: u64,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Print record count, max index, and checksum of the cache file
    Inspect {
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Delete the cache file
    Clear {
        #[arg(long)]
        cache: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Compute { kind, cache } => commands::compute(kind, cache),
        Command::Verify {
            suite,
            grid,
            output,
        } => commands::verify(suite, grid, output),
        Command::Sweep {
            grid,
            conjectures,
            output,
        } => commands::sweep(grid, conjectures, output),
        Command::Cache { action } => commands::cache(action),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
