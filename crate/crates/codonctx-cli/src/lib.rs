//! `codonctx`: score coding sequences for codon pair bias, assess
//! significance, build score tables from a corpus, and recode genes toward
//! maximal or minimal bias.

pub mod commands;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

/// Exit codes: 0 success, 2 FASTA error, 3 table error, 4 data
/// insufficiency, 5 resource cap exceeded, 64 usage error.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> CliError {
        CliError { code: 64, message: message.into() }
    }
    pub fn fasta(message: impl std::fmt::Display) -> CliError {
        CliError { code: 2, message: message.to_string() }
    }
    pub fn table(message: impl std::fmt::Display) -> CliError {
        CliError { code: 3, message: message.to_string() }
    }
    pub fn data(message: impl std::fmt::Display) -> CliError {
        CliError { code: 4, message: message.to_string() }
    }
    pub fn cap(message: impl std::fmt::Display) -> CliError {
        CliError { code: 5, message: message.to_string() }
    }
}

#[derive(Parser)]
#[command(
    name = "codonctx",
    version,
    about = "Codon pair bias scoring, significance, and gene recoding"
)]
pub struct Cli {
    /// Emit a single JSON document instead of human-readable text
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// Unconstrained dynamic programming (exact, linear time)
    Dp,
    /// Simulated annealing under a fixed codon distribution
    Sa,
    /// Branch and bound under a fixed codon distribution (exact)
    Bnb,
    /// Multiset dynamic programming under a fixed codon distribution (exact)
    Exact,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Max,
    Min,
}

#[derive(Subcommand)]
pub enum Command {
    /// CPB, pair count, and effective number of codons per record
    Score {
        /// FASTA file of coding sequences
        fasta: PathBuf,
        /// CPS table file (TSV); falls back to $CODONCTX_TABLE
        #[arg(env = "CODONCTX_TABLE")]
        table: PathBuf,
    },
    /// Significance of each record's CPB under the table's distribution
    Pvalue {
        fasta: PathBuf,
        #[arg(env = "CODONCTX_TABLE")]
        table: PathBuf,
        /// Override the per-pair score mean (needs --variance)
        #[arg(long, requires = "variance")]
        mean: Option<f64>,
        /// Override the per-pair score variance (needs --mean)
        #[arg(long, requires = "mean")]
        variance: Option<f64>,
    },
    /// Recode each record toward maximal or minimal CPB
    Optimize {
        fasta: PathBuf,
        #[arg(env = "CODONCTX_TABLE")]
        table: PathBuf,
        #[arg(long, value_enum)]
        method: MethodArg,
        #[arg(long, value_enum, default_value = "max")]
        direction: DirectionArg,
        /// Preserve each record's codon counts exactly (required for
        /// sa/bnb/exact)
        #[arg(long)]
        fix_distribution: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Annealing iterations per restart (sa/bnb)
        #[arg(long)]
        iterations: Option<u64>,
        /// Annealing restarts (sa/bnb)
        #[arg(long)]
        restarts: Option<u32>,
        /// Write recoded sequences to this FASTA file
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the annealing trace (TSV) here (sa only)
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Build a CPS table from a corpus of coding sequences
    BuildTable {
        corpus: PathBuf,
        /// Score log base: "e" or a number (default e); incompatible with
        /// --normalized, which fixes base 1.5
        #[arg(long)]
        log_base: Option<String>,
        /// Rescale expected counts per amino-acid-pair group and score in
        /// log base 1.5
        #[arg(long)]
        normalized: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Empirical CPB baseline over random same-distribution encodings, with
    /// an annealed min/max range
    Baseline {
        fasta: PathBuf,
        #[arg(env = "CODONCTX_TABLE")]
        table: PathBuf,
        /// Alternate designs to sample
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Annealing iterations per restart for the min/max range
        #[arg(long)]
        iterations: Option<u64>,
        /// Annealing restarts for the min/max range
        #[arg(long)]
        restarts: Option<u32>,
    },
}

