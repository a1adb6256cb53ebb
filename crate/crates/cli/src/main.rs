//! Command-line front end for the strip spectral toolkit.
//!
//! Every command prints a one-line summary giving spectral values both
//! in absolute units (1/length^2) and in units of the threshold
//! (pi/4a)^2; `--json` swaps the summary for a machine-readable report
//! that echoes the fully resolved configuration. Exit codes: 0 on
//! success, 2 for configuration errors, 3 for convergence failures,
//! 4 for an inconclusive verdict.

mod commands;
mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use output::OutputOpts;
use stripspec::Error;

#[derive(Debug, Parser)]
#[command(
    name = "stripspec",
    version,
    about = "Spectral analysis of a strip waveguide with switched boundary conditions",
    long_about = "Spectral analysis of the Laplacian on a planar strip whose Dirichlet and \
Neumann wall conditions switch sides at a configurable offset. Energies are absolute \
(1/length^2 units); summaries also print them in units of the threshold (pi/4a)^2. \
All computations are deterministic: identical configuration yields byte-identical output."
)]
struct Cli {
    /// Size of the worker thread pool (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Print the full JSON report to stdout (summary moves to stderr)
    #[arg(long, global = true)]
    json: bool,
    /// Write the JSON report to this file
    #[arg(long, global = true, value_name = "PATH")]
    out_json: Option<PathBuf>,
    /// Write the command's CSV table(s) to this file (multi-table
    /// commands insert a suffix before the extension)
    #[arg(long, global = true, value_name = "PATH")]
    out_csv: Option<PathBuf>,
    /// TOML file with defaults for this command; explicit flags win
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Solve the two dimensionless matching constants: the weight
    /// level s1 and the offset bound t1
    Roots(commands::RootsArgs),
    /// Sample the reduced-problem lowest eigenvalue across the window
    LambdaProfile(commands::ProfileArgs),
    /// Maximize a reduced-problem objective over the rotation angle
    OptimizeTheta(commands::OptimizeArgs),
    /// Mesh-ladder study of the lowest 2D eigenvalue against the
    /// threshold, bracketed by both truncation conditions
    #[command(name = "spectrum-2d")]
    Spectrum2d(commands::SpectrumArgs),
    /// Bisect for the switch offset where a state below the threshold
    /// first appears
    CriticalEps(commands::CriticalArgs),
    /// Check positivity of the threshold-shifted form minus a weight
    HardyCheck(commands::HardyCheckArgs),
    /// Sweep a potential bump across an interval and check the edge
    /// position minimizes the lowest eigenvalue
    HcLemma(commands::HcLemmaArgs),
    /// Rayleigh-quotient sequences showing no weight works for the
    /// uniform strip while the switched strip keeps a positive floor
    HardyFailure(commands::FailureArgs),
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter(_) => 2,
        Error::NoConvergence(_) | Error::NoRoot(_) => 3,
        Error::Inconclusive(_) => 4,
    }
}

fn main() {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        // a second initialization in-process is harmless; the pool is
        // already sized
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let opts = OutputOpts {
        json: cli.json,
        out_json: cli.out_json.clone(),
        out_csv: cli.out_csv.clone(),
    };
    let result = match &cli.cmd {
        Cmd::Roots(a) => commands::run_roots(a, &cli.config, &opts),
        Cmd::LambdaProfile(a) => commands::run_lambda_profile(a, &cli.config, &opts),
        Cmd::OptimizeTheta(a) => commands::run_optimize_theta(a, &cli.config, &opts),
        Cmd::Spectrum2d(a) => commands::run_spectrum_2d(a, &cli.config, &opts),
        Cmd::CriticalEps(a) => commands::run_critical_eps(a, &cli.config, &opts),
        Cmd::HardyCheck(a) => commands::run_hardy_check(a, &cli.config, &opts),
        Cmd::HcLemma(a) => commands::run_hc_lemma(a, &cli.config, &opts),
        Cmd::HardyFailure(a) => commands::run_hardy_failure(a, &cli.config, &opts),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(exit_code(&e));
    }
}
