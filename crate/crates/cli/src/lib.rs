//! Command-line front end for `umeb-core`: builds UMEB files, verifies and
//! certifies them, searches complements, checks mutual unbiasedness and
//! reports the complement channel.
//!
//! Exit codes: 0 success or affirmative answer, 1 property-negative answer,
//! 2 usage, format or I/O error, 3 inconclusive or numerical failure.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub mod commands;
pub mod format;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Format(String),
    #[error("{0}")]
    Io(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Format(_) | Self::Io(_) => EXIT_USAGE,
            Self::Numerical(_) => EXIT_INCONCLUSIVE,
        }
    }
}

impl From<umeb_core::Error> for CliError {
    fn from(e: umeb_core::Error) -> Self {
        match e {
            umeb_core::Error::Contract(m) => Self::Usage(m),
            umeb_core::Error::Numerical(m) => Self::Numerical(m),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "umeb",
    version,
    about = "Unextendible maximally entangled bases in C^d ⊗ C^d'"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// d² Weyl-generated states, 2 <= d < d'
    Weyl,
    /// first 2⊗3 basis: four ME states and two product states
    C23First,
    /// second 2⊗3 basis, mutually unbiased with the first
    C23Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LogBase {
    #[value(name = "2")]
    Two,
    #[value(name = "e")]
    E,
    /// the dimension d of the smaller factor
    #[value(name = "d")]
    D,
}

#[derive(Debug, Clone, clap::Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 64)]
    pub restarts: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub max_iters: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a basis and write it as umeb-basis/1 JSON.
    Construct {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        dprime: Option<usize>,
        /// Output file; standard output if omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check orthonormality and maximal entanglement of each member.
    Verify {
        path: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether the ME members of a basis are unextendible.
    Certify {
        path: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        json: bool,
    },
    /// Search the orthogonal complement of a set for a maximally entangled state.
    Search {
        path: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        json: bool,
    },
    /// Check whether two complete bases are mutually unbiased.
    Mub {
        path_a: PathBuf,
        path_b: PathBuf,
        #[arg(long, default_value_t = umeb_core::mub::DEFAULT_MUB_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Analyze the complement state of a d²-member ME set as a channel.
    Channel {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "2")]
        log_base: LogBase,
        /// Use every member instead of only the ME-flagged ones.
        #[arg(long)]
        all_members: bool,
        #[arg(long)]
        json: bool,
    },
    /// Print Weyl operators U_nm.
    Pauli {
        #[arg(long)]
        d: usize,
        #[arg(long, requires = "m")]
        n: Option<usize>,
        #[arg(long, requires = "n")]
        m: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

/// Runs one command and returns its exit code. Errors are reported on
/// standard error.
pub fn run(cli: Cli) -> i32 {
    match commands::dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
