//! `newton-resolve`: Newton-polyhedron analysis, chart atlases, resolution
//! trees and growth experiments from the command line.
//!
//! Every command writes one JSON document (stdout or `--out`). Exit codes:
//! 0 success, 1 a verification failed, 2 usage or input error.

mod commands;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "newton-resolve", version, about = "Newton polyhedra, monomializing charts and growth experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for the parallel harness code.
    #[arg(long, global = true, env = "NEWTON_RESOLVE_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Newton polyhedron, distance, central face, zero orders and growth case.
    Analyze {
        #[command(flatten)]
        input: PolyInput,
        #[arg(long, value_enum, default_value_t = FieldArg::Real)]
        field: FieldArg,
        /// Prime for `--field padic`.
        #[arg(long, default_value_t = 2)]
        prime: u64,
    },
    /// Chart atlas from the simplicial refinement of the normal fan, with the
    /// distance relation and factorization checks.
    Charts {
        #[command(flatten)]
        input: PolyInput,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Recursive chart tree with leaf certificates.
    Resolve {
        #[command(flatten)]
        input: PolyInput,
        /// Series truncation order [default: max(2 deg f, 12)].
        #[arg(long)]
        truncation: Option<u64>,
        /// Maximal recursion depth.
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Growth experiments against the predicted exponents.
    Verify {
        #[command(subcommand)]
        kind: VerifyKind,
    },
    /// Render a JSON report written by another command as a plain table.
    Report {
        /// JSON file; `-` reads stdin.
        path: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyKind {
    /// Normalized counts `N_l` of `p^l | f(x)` and exponential sums.
    Padic {
        #[command(flatten)]
        input: PolyInput,
        #[arg(long, default_value_t = 3)]
        prime: u64,
        /// Levels `1..=L`.
        #[arg(long, default_value_t = 10)]
        levels: u32,
        /// Largest `p^{ln}` enumerated by brute force (cross-check and exponential sums).
        #[arg(long, default_value_t = 10_000_000)]
        cap: u128,
        #[arg(long, value_enum, default_value_t = StrategyArg::Hensel)]
        strategy: StrategyArg,
        /// Count `f(p^{a_1} x_1, ..., p^{a_n} x_n)` instead of `f`.
        #[arg(long, value_delimiter = ',')]
        prescale: Option<Vec<u32>>,
        #[command(flatten)]
        tol: Tolerance,
    },
    /// Real sublevel-set volumes `|{x in [-r, r]^n : |f(x)| < eps}|`.
    Real {
        #[command(flatten)]
        input: PolyInput,
        #[command(flatten)]
        vol: VolumeArgs,
        #[arg(long, default_value_t = 0.5)]
        radius: f64,
    },
    /// Complex sublevel-set volumes on the unit polydisc.
    Complex {
        #[command(flatten)]
        input: PolyInput,
        #[command(flatten)]
        vol: VolumeArgs,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
    },
    /// Decay of `|int e^{i lambda f} phi|` (heuristic check).
    Osc {
        #[command(flatten)]
        input: PolyInput,
        /// Comma-separated ascending `lambda` values.
        #[arg(long, value_delimiter = ',', default_values_t = [10.0, 20.0, 40.0, 80.0, 160.0, 320.0, 640.0, 1280.0])]
        lambdas: Vec<f64>,
        #[command(flatten)]
        tol: Tolerance,
    },
}

#[derive(Args, Debug, Clone)]
struct PolyInput {
    /// Polynomial in x1..xn, e.g. "x1^2 + x2^3".
    polynomial: String,
    #[arg(short = 'n', long = "nvars")]
    nvars: usize,
}

#[derive(Args, Debug, Clone, Copy)]
struct Tolerance {
    /// Allowed deviation of the fitted exponent.
    #[arg(long, default_value_t = 0.05)]
    tol_slope: f64,
}

#[derive(Args, Debug, Clone)]
struct VolumeArgs {
    /// Comma-separated thresholds [default: 10^(-2-k/2) real, 10^(-1-k/4)
    /// complex, k = 0..8].
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
    /// Use the default threshold sweep (the same as omitting `--eps`).
    #[arg(long, conflicts_with = "eps")]
    eps_sweep: bool,
    /// Samples [default: 200000 sliced, 20000000 Monte Carlo].
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = SamplerArg::Auto)]
    sampler: SamplerArg,
    #[command(flatten)]
    tol: Tolerance,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum FieldArg {
    Real,
    Complex,
    Padic,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum StrategyArg {
    Brute,
    Hensel,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum SamplerArg {
    /// Sliced sampling over the reals, Monte Carlo over the complexes.
    Auto,
    MonteCarlo,
    Sliced,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        // only fails if a pool exists already, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let outcome = match cli.command {
        Command::Report { path } => report::render(&path),
        cmd => commands::run(cmd),
    };
    match outcome {
        Ok(out) => {
            if let Err(e) = out.write(cli.out.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if out.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
