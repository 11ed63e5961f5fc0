//! `qrdecomp`: character sums, sumset profiles, inequality checks and the
//! decomposition search for the quadratic residues of F_p.
//!
//! Exit status: 0 success, 1 a checked inequality failed or a decomposition
//! with `|A|, |B| >= 2` was found, 2 usage or input error.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Parser, Debug)]
#[command(
    name = "qrdecomp",
    version,
    about = "Quadratic residues, character sums and sumset decompositions over F_p"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Seed for every sampled computation.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, env = "QRDECOMP_WORKERS", default_value_t = 0)]
    pub workers: usize,
    /// Write output here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Output format; csv applies to `hist` and `verify-range` only.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// S_k(a; p) = sum_x chi((x+a_1)...(x+a_k)) with the Weil bound |S| <= (k-1) sqrt(p)
    /// and, for even k, the bound S <= (k-2) sqrt(p) - 1.
    Charsum {
        #[arg(long)]
        p: u64,
        /// Comma-separated shifts a_1,...,a_k.
        #[arg(
            long,
            value_delimiter = ',',
            allow_negative_numbers = true,
            required = true
        )]
        tuple: Vec<i64>,
    },
    /// c_k(p) = max over distinct tuples of S_k(a; p) / sqrt(p).
    Ck {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: usize,
        /// Sample this many random tuples instead of enumerating all of them.
        #[arg(long)]
        samples: Option<u64>,
        /// Largest number of anchored tuples an exhaustive run may visit.
        #[arg(long, default_value_t = qrdecomp_core::charsum::DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Histogram of (S_k(a; p) + 1) / sqrt(p) over distinct tuples at fixed p,
    /// with the semicircle density sqrt(4 - t^2) / (2 pi) for k = 4.
    Hist {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long, default_value_t = 40)]
        bins: usize,
        /// Sample this many random tuples instead of enumerating all of them.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = qrdecomp_core::charsum::DEFAULT_BUDGET)]
        budget: u128,
    },
    /// (S_k(a mod p; p) + 1) / sqrt(p) for a fixed integer tuple over a range of primes.
    Sweep {
        #[arg(
            long,
            value_delimiter = ',',
            allow_negative_numbers = true,
            required = true
        )]
        tuple: Vec<i64>,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long, default_value_t = 40)]
        bins: usize,
    },
    /// Representation profile r(x) of A + B: M_0 = |A+B|, M_1 = |A||B|, energy E,
    /// unique count U, with the Hölder, kappa and tau checks; the conditional
    /// size lemmas are added when A + B lies in the residues.
    Sumset {
        #[arg(long)]
        p: u64,
        #[arg(
            long = "a",
            value_delimiter = ',',
            allow_negative_numbers = true,
            required = true
        )]
        a: Vec<i64>,
        #[arg(
            long = "b",
            value_delimiter = ',',
            allow_negative_numbers = true,
            required = true
        )]
        b: Vec<i64>,
    },
    /// Admissible |A|, |B| for A + B = R_p, the lower bound sqrt(p)/ln 2 - 1.6,
    /// the eta-dependent energy bounds and the delta-dependent size bounds.
    Bounds {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 0.0)]
        eta: f64,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
    },
    /// Exhaustive search for A + B = R_p with |A| >= min-a, |B| >= min-b.
    Search {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        min_a: u32,
        #[arg(long, default_value_t = 2)]
        min_b: u32,
        /// Disable the sqrt(p)/4 + 1/8 <= |A|,|B| < 2 sqrt(p) - 1 and product constraints.
        #[arg(long)]
        no_theorem1: bool,
        /// Disable |A|, |B| >= 5.
        #[arg(long)]
        no_lemma5: bool,
        /// Restrict to A = B.
        #[arg(long)]
        symmetric: bool,
        /// Search only A containing 0 and 1, or 0 and the least non-residue.
        #[arg(long)]
        dilation: bool,
        #[arg(long, default_value_t = qrdecomp_core::search::DEFAULT_NODE_LIMIT)]
        node_limit: u64,
    },
    /// Search every odd prime in [from, to] for A + B = R_p with |A|, |B| >= 2.
    VerifyRange {
        #[arg(long, default_value_t = 3)]
        from: u64,
        #[arg(long, default_value_t = 61)]
        to: u64,
        #[arg(long)]
        no_theorem1: bool,
        #[arg(long)]
        no_lemma5: bool,
        #[arg(long)]
        dilation: bool,
        #[arg(long, default_value_t = qrdecomp_core::search::DEFAULT_NODE_LIMIT)]
        node_limit: u64,
        /// Fill the seconds column (output then varies between runs).
        #[arg(long)]
        timing: bool,
    },
    /// Random-instance panels for the unconditional moment inequalities and the
    /// conditional size lemmas, plus the p >= 37 step of the sqrt(p)/ln 2 - 1.6 bound.
    VerifyLemmas {
        /// Primes for the unconditional panel.
        #[arg(long, value_delimiter = ',', default_values_t = [11u64, 31, 101])]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
        /// Primes for the conditional panel (A + B inside the residues).
        #[arg(long, value_delimiter = ',', default_values_t = [31u64, 101, 499])]
        residue_primes: Vec<u64>,
        #[arg(long, default_value_t = 500)]
        instances: usize,
        /// Check the numeric step for every prime 37 <= p <= this (0 skips it).
        #[arg(long, default_value_t = 100_000)]
        step_max: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
