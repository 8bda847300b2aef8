//! Command-line front end: parse arguments, hand off to the `cli` module.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use spingarn::cli::{self, CheckKind};

#[derive(Parser)]
#[command(
    name = "spingarn",
    version,
    about = "Partial-inverse and primal-dual splitting solvers for composite monotone inclusions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a JSON problem-spec file and print `status iterations rho_primal rho_dual`.
    Solve {
        /// Path to the problem-spec file
        spec: PathBuf,
        /// Write the convergence history as CSV
        #[arg(long)]
        out: Option<PathBuf>,
        /// Suppress the summary line
        #[arg(long)]
        quiet: bool,
    },
    /// Run a randomized verification suite and print its max deviation.
    Check {
        /// Which suite to run
        kind: CheckArg,
        /// Dimension bounds, e.g. `8x5` (or a single number for square)
        #[arg(long, default_value = "8x8")]
        dims: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run both composite recursions in lockstep and print their max discrepancy.
    Compare {
        /// Path to a composite problem-spec file
        spec: PathBuf,
        #[arg(long, default_value_t = 200)]
        iters: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CheckArg {
    #[value(name = "projections")]
    Projections,
    #[value(name = "partial_inverse")]
    PartialInverse,
    #[value(name = "firm_nonexpansive")]
    FirmNonexpansive,
}

impl From<CheckArg> for CheckKind {
    fn from(arg: CheckArg) -> Self {
        match arg {
            CheckArg::Projections => CheckKind::Projections,
            CheckArg::PartialInverse => CheckKind::PartialInverse,
            CheckArg::FirmNonexpansive => CheckKind::FirmNonexpansive,
        }
    }
}

fn parse_dims(text: &str) -> Option<(usize, usize)> {
    if let Some((a, b)) = text.split_once(['x', 'X']) {
        let n = a.trim().parse().ok()?;
        let m = b.trim().parse().ok()?;
        Some((n, m))
    } else {
        let n = text.trim().parse().ok()?;
        Some((n, n))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Solve { spec, out, quiet } => cli::cmd_solve(&spec, out.as_deref(), !quiet),
        Command::Check {
            kind,
            dims,
            trials,
            seed,
        } => match parse_dims(&dims) {
            Some(d) => cli::cmd_check(kind.into(), d, trials, seed),
            None => {
                eprintln!("error: cannot parse --dims `{dims}` (expected `N` or `NxM`)");
                1
            }
        },
        Command::Compare { spec, iters } => cli::cmd_compare(&spec, iters),
    };
    ExitCode::from(code as u8)
}
