//! `algostat`: command-line workbench over the halting table.

mod commands;
mod manifest;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use algostat::LabError;
use clap::{Args, Parser, Subcommand};
use thiserror::Error;

/// Exact algorithmic statistics at desk scale.
#[derive(Debug, Parser)]
#[command(name = "algostat", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Maximal program length L in bits.
    #[arg(long, global = true, default_value_t = 20)]
    pub max_prog_len: u32,
    /// Step budget T per run.
    #[arg(long, global = true, default_value_t = 1024)]
    pub steps: u32,
    /// Totality is judged over all conditions of at most this many bits.
    #[arg(long, global = true, default_value_t = 6)]
    pub cond_universe: u32,
    /// Halting-table cache file; loaded if present, written after a build.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Directory for artifacts and run manifests.
    #[arg(long, global = true, default_value = "algostat-out")]
    pub out: PathBuf,
    /// Accepted for scripts; every computation is deterministic.
    #[arg(long, global = true)]
    pub seedless: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the halting table and write the cache file.
    BuildCache,
    /// C(x).
    Complexity {
        #[arg(long)]
        x: String,
    },
    /// C(y|x), or CT(y|x) with --total.
    Ct {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        total: bool,
    },
    /// Print Ω_0..Ω_m and write the ledger CSV.
    Omega {
        #[arg(long)]
        m: u32,
    },
    /// Write the group decomposition S_{m',s} for every m' ≤ m.
    Groups {
        #[arg(long)]
        m: u32,
    },
    /// Profile frontier of x.
    Profile(ProfileArgs),
    /// Strong profile of x: models with CT([A]|x) ≤ ε.
    StrongProfile {
        #[command(flatten)]
        common: ProfileArgs,
        /// ε in bits, or `inf`.
        #[arg(long)]
        epsilon: String,
    },
    /// Profile over one model family.
    RestrictedProfile {
        #[command(flatten)]
        common: ProfileArgs,
        /// cylinders, singletons, or all-sets.
        #[arg(long, default_value = "cylinders")]
        family: String,
    },
    /// The antistochastic string of length n for threshold k.
    Antistochastic {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Theorem-3 string, its cylinder model and the group sweep, as a bundle.
    Theorem3 {
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[command(flatten)]
        mss: MssArgs,
    },
    /// Improvement sequence from a strong model of x.
    Improve {
        #[arg(long)]
        x: String,
        /// Cylinder model: every string of length l(x) with this prefix.
        #[arg(long, conflicts_with = "set")]
        prefix: Option<String>,
        /// Explicit model: comma-separated elements.
        #[arg(long)]
        set: Option<String>,
        /// Strength bound ε (default: the calibrated cylinder overhead).
        #[arg(long)]
        epsilon: Option<u32>,
        #[arg(long)]
        alpha: Option<u32>,
        #[arg(long)]
        theta: Option<u32>,
        #[arg(long, default_value_t = 16)]
        cap: usize,
    },
    /// Hereditary pipeline on the Theorem-3 pair.
    Hereditary {
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[command(flatten)]
        mss: MssArgs,
        /// Enforce the factor-2 H bound instead of the disjointness bound.
        #[arg(long)]
        halved_bound: bool,
    },
    /// Run a verification suite; exit 1 on any violation.
    Verify {
        /// codec, ledger, groups, theorem1, containment, ct, or all.
        #[arg(long)]
        suite: String,
        /// String length (or level for ledger and groups).
        #[arg(long)]
        n: usize,
        /// Calibration file (default: the built-in constants).
        #[arg(long)]
        calibration: Option<PathBuf>,
    },
    /// Overlay profile CSVs in one SVG.
    Plot {
        #[arg(long = "csv", required = true)]
        csvs: Vec<PathBuf>,
        #[arg(long = "label")]
        labels: Vec<String>,
        #[arg(long, default_value = "plot.svg")]
        name: String,
        #[arg(long, default_value = "profiles")]
        title: String,
    },
    /// Measure the slack constants and compare them with the built-in ones.
    Calibrate {
        /// Write the measured constants to this file.
        #[arg(long)]
        write: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct ProfileArgs {
    #[arg(long)]
    pub x: String,
    /// Largest model complexity scanned (default L).
    #[arg(long)]
    pub m_max: Option<u32>,
    /// Also write an SVG plot.
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, Clone, Args)]
pub struct MssArgs {
    /// δ in the minimality test (default: calibrated).
    #[arg(long)]
    pub delta: Option<u32>,
    /// ε in the sufficiency test (default: calibrated).
    #[arg(long)]
    pub mss_epsilon: Option<f64>,
    /// D in the minimality test (default: calibrated).
    #[arg(long)]
    pub d: Option<f64>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{op}: {source}")]
    Lab {
        op: &'static str,
        #[source]
        source: LabError,
    },
    #[error("{op}: {detail}")]
    Usage { op: &'static str, detail: String },
    #[error("{op}: invariant violated: {detail}")]
    Violation { op: &'static str, detail: String },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Violation { .. } => 1,
            // Every library error is a refusal of the request: bad input,
            // scale exceeded, a mismatched cache, an unmet precondition.
            CliError::Usage { .. } | CliError::Lab { .. } => 2,
        }
    }
}

pub trait Context<T> {
    fn op(self, op: &'static str) -> Result<T, CliError>;
}

impl<T> Context<T> for algostat::Result<T> {
    fn op(self, op: &'static str) -> Result<T, CliError> {
        self.map_err(|source| CliError::Lab { op, source })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match commands::run(&cli, argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("algostat: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
