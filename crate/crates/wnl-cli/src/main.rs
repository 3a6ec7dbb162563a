use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

mod checks;
mod cmds;
mod config;
mod io;

use config::{FormatArg, Settings};

/// One failure channel per exit code. `Verification` means the payload
/// already explains what failed; nothing extra goes to stderr.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Core(wnl_core::Error),
    Verification,
}

impl From<wnl_core::Error> for Failure {
    fn from(e: wnl_core::Error) -> Self {
        Failure::Core(e)
    }
}

fn core_exit(e: &wnl_core::Error) -> i32 {
    use wnl_core::Error::*;
    match e {
        ZeroVector
        | DimensionMismatch { .. }
        | OutOfDomain { .. }
        | NotUniformlyConvex { .. }
        | OutOfRange { .. }
        | NotUnitFunctional { .. }
        | ZeroPolynomial
        | NonPositiveMax { .. }
        | Schema(_) => 2,
        NoConvergence { .. }
        | HypothesisViolated { .. }
        | GuaranteeFailed { .. }
        | MonitorViolation { .. }
        | InequalityViolated { .. }
        | VerificationFailed { .. } => 1,
    }
}

#[derive(Parser)]
#[command(
    name = "wnl",
    version,
    about = "Weighted polynomial norms on complex lp balls: constants, norms, \
explicit families, and the norm-correction iteration"
)]
struct Cli {
    /// JSON file with default settings; command-line flags override it
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Output format, where the command offers a choice
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    /// Write the payload to this file instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// RNG seed; defaults to WNL_SEED from the environment, then 0
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Random restarts per multi-start search
    #[arg(long, global = true)]
    restarts: Option<usize>,

    /// Iteration cap per ascent run
    #[arg(long, global = true)]
    max_iters: Option<usize>,

    /// Resolution of the radial grid behind the v-norm outer search
    #[arg(long, global = true)]
    radial_grid: Option<usize>,

    /// Ascent stops when the backtracked step falls below this
    #[arg(long, global = true)]
    step_tol: Option<f64>,

    /// Relative tolerance for treating two maxima as equal
    #[arg(long, global = true)]
    value_tol: Option<f64>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum NormKind {
    /// norm over the sphere of radius --s
    S,
    /// norm over the unit sphere
    Sup,
    /// weighted norm over the open unit ball
    V,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum ModeArg {
    /// proof-grade constants and slacks
    Faithful,
    /// measured Lipschitz constant and floating-point slacks
    Practical,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Family {
    /// two-term diagonal family with inner radius r
    #[value(name = "Pr", alias = "pr")]
    Pr,
    /// two-term diagonal family whose sup sits at 2
    #[value(name = "Q", alias = "q")]
    Q,
    /// power of a unit functional
    #[value(name = "fN", alias = "fn")]
    Fn,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the constants table for degrees 1..=n-max
    Constants {
        #[arg(long, default_value_t = 8)]
        n_max: usize,
    },
    /// Compute a norm of a polynomial read from a JSON file
    Norm {
        /// Expected ambient space as "n,p"; cross-checked against the file
        #[arg(long)]
        space: Option<String>,
        #[arg(long, value_name = "FILE")]
        poly: PathBuf,
        #[arg(long, value_enum, default_value_t = NormKind::V)]
        mode: NormKind,
        /// Sphere radius, required with --mode s
        #[arg(long)]
        s: Option<f64>,
    },
    /// Build an explicit family and verify its advertised behavior
    Counterexample {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Leading degree (for fN: the power)
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Inner radius, required for family Pr
        #[arg(long)]
        r: Option<f64>,
        /// Coordinates kept by the finite truncation
        #[arg(long, default_value_t = 64)]
        n_trunc: usize,
        /// Sweep this many uniform s values instead of the built-in grid
        #[arg(long, default_value_t = 0)]
        s_grid: usize,
    },
    /// Run the norm-correction iteration from a starting pair
    Bollobas {
        /// Expected ambient space as "n,p"; cross-checked against the files
        #[arg(long)]
        space: Option<String>,
        #[arg(long, value_name = "FILE")]
        poly: PathBuf,
        /// Starting point, a JSON vector document
        #[arg(long, value_name = "FILE")]
        x: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = ModeArg::Practical)]
        mode: ModeArg,
    },
    /// Run the property suite; nonzero exit if any check fails
    Verify {
        /// Only run checks whose name contains this substring
        #[arg(long)]
        filter: Option<String>,
    },
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(failure) => {
            match &failure {
                Failure::Usage(msg) => eprintln!("usage error: {msg}"),
                Failure::Core(e) => eprintln!("error: {e}"),
                Failure::Verification => {}
            }
            match &failure {
                Failure::Usage(_) => 64,
                Failure::Core(e) => core_exit(e),
                Failure::Verification => 1,
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    let flags = config::Flags {
        config: cli.config,
        format: cli.format,
        out: cli.out,
        seed: cli.seed,
        restarts: cli.restarts,
        max_iters: cli.max_iters,
        radial_grid: cli.radial_grid,
        step_tol: cli.step_tol,
        value_tol: cli.value_tol,
    };
    let settings: Settings = config::effective(&flags)?;
    match cli.cmd {
        Cmd::Constants { n_max } => cmds::constants(&settings, n_max),
        Cmd::Norm {
            space,
            poly,
            mode,
            s,
        } => cmds::norm(&settings, space.as_deref(), &poly, mode, s),
        Cmd::Counterexample {
            family,
            p,
            k,
            r,
            n_trunc,
            s_grid,
        } => cmds::counterexample(&settings, family, p, k, r, n_trunc, s_grid),
        Cmd::Bollobas {
            space,
            poly,
            x,
            eps,
            mode,
        } => cmds::bollobas(&settings, space.as_deref(), &poly, &x, eps, mode),
        Cmd::Verify { filter } => cmds::verify(&settings, filter.as_deref()),
    }
}
