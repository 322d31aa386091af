mod commands;
mod output;

use ambig_core::AmbigError;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

/// Ambiguity analysis for integer linear arrays.
#[derive(Parser)]
#[command(name = "ambig", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Semistandard Young tableaux of the array shape.
    Ssyt {
        #[command(flatten)]
        array: ArrayArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Enumerate ambiguity classes via rotated minimal vanishing sums.
    Enumerate(EnumerateArgs),
    /// Rank test of the steering matrix at given angles.
    Verify(VerifyArgs),
    /// Analysis of arrays symmetric about their center.
    Symmetric {
        #[command(subcommand)]
        command: SymmetricCommand,
    },
    /// Show and validate the vanishing-sum catalog in use.
    Catalog {
        /// Print the catalog file instead of a summary.
        #[arg(long)]
        text: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Clone)]
pub struct ArrayArgs {
    /// Element positions, e.g. `0,1,3,4`.
    #[arg(long, allow_hyphen_values = true)]
    pub array: String,
    /// Baseline in half wavelengths, e.g. `1` or `1/2`.
    #[arg(long, default_value = "1")]
    pub baseline: String,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write to a file instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub array: ArrayArgs,
    /// Restrict to one partition such as `6+6`.
    #[arg(long)]
    pub partition: Option<String>,
    /// Disable symmetry pruning.
    #[arg(long)]
    pub no_prune: bool,
    /// Skip the per-partition configuration count.
    #[arg(long)]
    pub no_count: bool,
    /// Search-node budget per partition.
    #[arg(long)]
    pub node_budget: Option<u64>,
    /// Wall-clock budget per partition in seconds.
    #[arg(long)]
    pub time_budget: Option<f64>,
    /// Worker threads; 1 runs sequentially.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Include wall times in the report.
    #[arg(long)]
    pub timings: bool,
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
pub struct AngleArgs {
    /// Directions of arrival in degrees.
    #[arg(long, allow_hyphen_values = true)]
    pub degrees: Option<String>,
    /// Directions of arrival in radians.
    #[arg(long, allow_hyphen_values = true)]
    pub radians: Option<String>,
    /// Electrical angles in turns, exact rationals allowed (`-1/2,1/3`).
    #[arg(long, allow_hyphen_values = true)]
    pub turns: Option<String>,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub array: ArrayArgs,
    #[command(flatten)]
    pub angles: AngleArgs,
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Subcommand)]
pub enum SymmetricCommand {
    /// Centering shift and reduced array, if any.
    Detect {
        #[command(flatten)]
        array: ArrayArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Characteristic points of one order.
    Charpoints {
        #[command(flatten)]
        array: ArrayArgs,
        #[arg(long)]
        order: u32,
        /// Scan intervals over the manifold length.
        #[arg(long, default_value_t = ambig_core::symmetric::DEFAULT_RESOLUTION)]
        resolution: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Compare the real-part test of the half array with the full array.
    ReduceCheck {
        #[command(flatten)]
        array: ArrayArgs,
        /// Half-array directions in degrees, inside (0, 90).
        #[arg(long)]
        degrees: String,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Pairs `(v1, v2)` with singular real part, 4-element arrays only.
    Family {
        #[command(flatten)]
        array: ArrayArgs,
        /// Grid of `v1` in degrees; default 1, 2, ..., 89.
        #[arg(long)]
        degrees: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

/// Exit status for the final outcome of a command.
pub enum Outcome {
    Done,
    Incomplete,
    Trivial,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Ssyt { array, out } => commands::ssyt(&array, &out),
        Command::Enumerate(args) => commands::enumerate(&args),
        Command::Verify(args) => commands::verify(&args),
        Command::Symmetric { command } => commands::symmetric(&command),
        Command::Catalog { text, out } => commands::catalog(text, &out),
    };
    match res {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Incomplete) => ExitCode::from(3),
        Ok(Outcome::Trivial) => ExitCode::from(5),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<AmbigError>() {
        Some(AmbigError::Verification(_)) => 4,
        Some(AmbigError::Io(_)) | Some(AmbigError::Overflow(_)) | Some(AmbigError::OracleBudget(_)) => 1,
        Some(_) => 2,
        None => 1,
    }
}
