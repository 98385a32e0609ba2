use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use luinv_core::gaugesvd::{DEFAULT_EPS_DEG, DEFAULT_EPS_ZERO};
use luinv_core::invariants::DEFAULT_EPS_CMP;

use crate::report::Thresholds;

/// Local-unitary invariant fingerprints of two- and three-qudit states.
///
/// Exit codes: 0 = inconclusive / success, 1 = certified not LU
/// equivalent, 2 = error.
#[derive(Debug, Parser)]
#[command(name = "luinv", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the generalized Bloch coefficients of a state.
    Decompose {
        /// State file, or `-` for standard input.
        file: String,
        /// Expected number of parties; the file's dims must agree.
        #[arg(long)]
        parties: Option<usize>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Compute the invariant fingerprint of a state.
    ///
    /// Given a fingerprint report instead of a state, the report is
    /// re-emitted after validation.
    Invariants {
        file: String,
        #[arg(long)]
        parties: Option<usize>,
        #[command(flatten)]
        thresholds: ThresholdArgs,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Compare two states or reports; exit 1 certifies non-equivalence.
    Compare {
        /// Two state files or fingerprint reports.
        #[arg(num_args = 0..=2, conflicts_with = "pairs")]
        files: Vec<String>,
        /// Batch mode: a text file with one whitespace-separated pair per line.
        #[arg(long)]
        pairs: Option<PathBuf>,
        /// Worker threads for batch mode.
        #[arg(long, default_value_t = 1, requires = "pairs")]
        jobs: usize,
        #[command(flatten)]
        thresholds: ThresholdArgs,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Concurrence of a pure two-qudit state, with the block-norm identity check.
    Concurrence {
        file: String,
        #[command(flatten)]
        thresholds: ThresholdArgs,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Sample a seeded random state, optionally with a random LU image.
    Random(RandomArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ThresholdArgs {
    /// Degeneracy threshold, relative to max(sigma_1, 1).
    #[arg(long, default_value_t = DEFAULT_EPS_DEG)]
    pub eps_deg: f64,
    /// Zero threshold, relative to max(sigma_1, 1).
    #[arg(long, default_value_t = DEFAULT_EPS_ZERO)]
    pub eps_zero: f64,
    /// Comparison tolerance.
    #[arg(long, default_value_t = DEFAULT_EPS_CMP)]
    pub eps_cmp: f64,
}

impl From<ThresholdArgs> for Thresholds {
    fn from(a: ThresholdArgs) -> Self {
        Thresholds {
            eps_deg: a.eps_deg,
            eps_zero: a.eps_zero,
            eps_cmp: a.eps_cmp,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RandomArgs {
    /// Local dimension of every party.
    #[arg(long)]
    pub dim: usize,
    #[arg(long, default_value_t = 2)]
    pub parties: usize,
    /// Rank of the state; defaults to full rank.
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long, env = "LU_INVAR_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Also write `<stem>.lu.json` and `<stem>.unitaries.json` next to `--out`.
    #[arg(long, requires = "out")]
    pub apply_lu: bool,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}
