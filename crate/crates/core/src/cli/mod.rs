//! The `ergosum` command-line front end.
//!
//! Exit statuses: 0 success, 1 I/O or numerical failure, 2 invalid config,
//! 3 precision exhausted, 4 resource budget exceeded.

mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};

use crate::error::{Error, Result};
pub use report::{Cell, Format, Report};

#[derive(Parser, Debug)]
#[command(
    name = "ergosum",
    version,
    about = "Ergodic sums of step functions over irrational rotations"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Rotation number: golden, sqrtD, surd:P:Q:D, literal:prefix;tail,
    /// counterexample:gamma=r, linear
    #[arg(long, global = true, default_value = "golden")]
    pub alpha: String,
    /// Function preset: phi0, psi_half, zero, ex1:u=.., ex2:u=..,w=..,
    /// ex3:r/s, billiard, billiard1, billiard2, step:u=..;v=..
    #[arg(long, global = true, default_value = "phi0")]
    pub phi: String,
    /// Working precision of the convergent table (default grows with depth)
    #[arg(long, global = true)]
    pub precision_bits: Option<u32>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for sampling cross-checks; primary results never depend on it
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output format (default depends on the command)
    #[arg(long, global = true, value_enum)]
    pub out: Option<Format>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// key = value file; command-line flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Partial quotients and convergents
    Cf {
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Ostrowski numeration
    #[command(subcommand)]
    Ostrowski(OstrowskiCmd),
    /// ‖φ_n‖₂² for 1 ≤ n ≤ nmax
    Variance {
        #[arg(long)]
        nmax: u64,
        #[arg(long, value_enum, default_value = "exact")]
        method: VarianceMethod,
        /// Fourier cutoff L
        #[arg(long, default_value_t = 1 << 16)]
        cutoff: u64,
        /// Random (n, x) pairs checked against direct summation
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// #{n ∈ [n1, n2) : ‖n q_j α‖ < δ} against 20(δ + 1/q_{j+1})(n2 − n1)
    CountNear {
        #[arg(long)]
        j: usize,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        n1: u128,
        #[arg(long)]
        n2: u128,
    },
    /// Diophantine sums: s1:t, s2:r, d1:n,l, d2:n,m,L, d3:n,m,l,L
    DioSum {
        #[arg(long)]
        kind: String,
        /// Growth exponent of the partial quotients
        #[arg(long, default_value_t = 0.0)]
        p: f64,
    },
    /// ∫ ψ Π φ_{b q_k} dμ for factors b:k
    Decorrelate {
        /// Defaults to --phi
        #[arg(long)]
        psi: Option<String>,
        /// Comma-separated b:k pairs, 1 to 3 of them
        #[arg(long)]
        factors: String,
    },
    /// Variance-window sets and record variances for 1 ≤ n ≤ nmax
    ScanClt {
        #[arg(long)]
        nmax: u64,
        #[arg(long, default_value_t = commands::DEFAULT_B)]
        b: f64,
        #[arg(long, default_value_t = commands::DEFAULT_BIG_B)]
        big_b: f64,
        /// Also compute the Kolmogorov distance at every n
        #[arg(long)]
        distance: bool,
    },
    /// Kolmogorov distances at record-variance indices or explicit n
    CltRun {
        /// Record-variance levels, e.g. 10,22 or 6-12
        #[arg(long, conflicts_with = "n")]
        ell: Option<String>,
        #[arg(long)]
        n: Option<String>,
    },
    /// The non-Gaussian example with a_n = ⌊n^γ⌋ at powers of two
    Counterexample {
        #[arg(long, default_value = "1")]
        gamma: String,
        #[arg(long, default_value = "6-12")]
        ell: String,
    },
    /// Covariance of a pair of sums divided by log n
    VectorCov {
        #[arg(long)]
        n: u64,
        /// Second component when --phi is scalar
        #[arg(long)]
        phi2: Option<String>,
    },
    /// Subshift of Ostrowski digits for quadratic α
    #[command(subcommand)]
    Sft(SftCmd),
}

#[derive(Subcommand, Debug)]
pub enum OstrowskiCmd {
    Expand {
        #[arg(long)]
        n: u128,
    },
    Check {
        /// Comma-separated digits, least significant first
        #[arg(long)]
        word: String,
    },
    Enumerate {
        #[arg(long)]
        m: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum SftCmd {
    Build,
    Measure {
        /// Cylinder word as comma-separated letter indices
        #[arg(long)]
        word: Option<String>,
    },
    Scan {
        #[arg(long, default_value_t = 10_000)]
        nmax: u64,
        #[arg(long, default_value_t = 1000)]
        fit_n: u64,
        #[arg(long, default_value_t = 0.5)]
        lo_pct: f64,
        #[arg(long, default_value_t = 99.5)]
        hi_pct: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum VarianceMethod {
    Exact,
    Fourier,
}

type Resolved = std::collections::BTreeMap<String, String>;

/// `Ok(Err(status))` when clap already printed help, version or a usage error.
fn parse(args: Vec<OsString>) -> Result<std::result::Result<(Cli, Resolved), i32>> {
    let mut root = Cli::command().args_override_self(true);
    root.build();
    let args = match config::config_path(&args) {
        Some(path) => {
            let entries = config::read_config_file(path.as_ref())?;
            config::merge_args(&root, args, &entries)
        }
        None => args,
    };
    let matches = match root.try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return Ok(Err(if e.use_stderr() { 2 } else { 0 }));
        }
    };
    let cli = Cli::from_arg_matches(&matches).map_err(|e| Error::InvalidInput(e.to_string()))?;
    Ok(Ok((cli, config::resolved(&matches))))
}

fn execute(cli: &Cli, resolved: &Resolved) -> Result<()> {
    let report = match cli.global.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| Error::InvalidInput(e.to_string()))?
            .install(|| commands::run(cli)),
        None => commands::run(cli),
    }?;
    let mut buf = Vec::new();
    report.write(&mut buf, resolved, cli.global.out)?;
    match &cli.global.output {
        Some(path) => std::fs::write(path, buf)?,
        None => std::io::stdout().lock().write_all(&buf)?,
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status; diagnostics go to stderr.
pub fn main_with_args(args: Vec<OsString>) -> i32 {
    let (cli, resolved) = match parse(args) {
        Ok(Ok(p)) => p,
        Ok(Err(status)) => return status,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    match execute(&cli, &resolved) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
