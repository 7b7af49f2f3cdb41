//! `sdpi`: command-line access to strong data processing constants,
//! rate-distortion curves and distributed source coding bounds.
//!
//! Results are JSON on standard output; diagnostics go to standard error.
//! Exit codes: 0 success, 2 parse error, 3 invalid input, 4 I/O failure.

mod commands;
mod error;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sdpi_core::RateDistortionTuple;

use commands::{BoundsArgs, GridSpec, RdMode};
use error::{CliError, CliResult};

#[derive(Parser)]
#[command(
    name = "sdpi",
    version,
    about = "Strong data processing constants and source coding bounds"
)]
struct Cli {
    /// Seed for the multi-start search.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// JSON file overriding solver settings.
    #[arg(long, global = true, value_name = "JSON")]
    config: Option<PathBuf>,

    /// Write the primary output here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// s* in both directions and rho* for a joint distribution.
    Sstar {
        /// Joint distribution: {"x_size", "y_size", "probs"} (row-major).
        joint: PathBuf,
    },
    /// Rate-distortion function by Blahut-Arimoto.
    Rd(RdArgs),
    /// Single-letter outer bounds and the sum-rate bound for a rate tuple.
    Bounds(BoundsCli),
    /// Gaussian sum-rate comparison table as CSV.
    GaussFigures {
        #[arg(long, allow_hyphen_values = true)]
        rho: f64,
        /// default | diag:N | product:P:N | points:DX/DY,...
        #[arg(long, default_value = "default")]
        grid: GridSpec,
    },
    /// Rate bound for the CEO problem.
    Ceo {
        #[arg(long, value_delimiter = ',', required = true)]
        rates: Vec<f64>,
        /// s*(Y_i;X) per agent, in the same order as --rates.
        #[arg(long, value_delimiter = ',', required = true)]
        sstars: Vec<f64>,
        /// R_X(D).
        #[arg(long)]
        target: f64,
    },
    /// Common randomness per bit of communication.
    Cr {
        /// Communication rate R.
        #[arg(long)]
        rate: f64,
        /// Common randomness rate C.
        #[arg(long)]
        capacity: f64,
        #[arg(long)]
        sstar: f64,
    },
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("mode").required(true).args(["distortion_target", "curve"]))]
struct RdArgs {
    /// Source distribution: {"probs"}.
    source: PathBuf,
    /// Distortion matrix: {"x_size", "xhat_size", "costs"} (row-major).
    distortion: PathBuf,
    #[arg(long)]
    distortion_target: Option<f64>,
    /// Number of evenly spaced points from D_min to D_max.
    #[arg(long)]
    curve: Option<usize>,
}

#[derive(Args)]
struct BoundsCli {
    joint: PathBuf,
    #[arg(long)]
    rx: f64,
    #[arg(long)]
    ry: f64,
    #[arg(long)]
    dx: f64,
    #[arg(long)]
    dy: f64,
    /// Distortion matrix for X (Hamming if omitted).
    #[arg(long, value_name = "JSON")]
    x_distortion: Option<PathBuf>,
    /// Distortion matrix for Y (Hamming if omitted).
    #[arg(long, value_name = "JSON")]
    y_distortion: Option<PathBuf>,
}

fn run(cli: Cli) -> CliResult<()> {
    let cfg = || input::config(cli.config.as_deref(), cli.seed);
    let out = cli.out.as_deref();
    let value = match cli.command {
        Command::Sstar { joint } => commands::sstar_both(&joint, &cfg()?)?,
        Command::Rd(a) => {
            let mode = match (a.distortion_target, a.curve) {
                (Some(t), _) => RdMode::Target(t),
                (None, Some(n)) => RdMode::Curve(n),
                (None, None) => return Err(CliError::Usage("missing mode".into())),
            };
            commands::rd(&a.source, &a.distortion, mode)?
        }
        Command::Bounds(b) => {
            let tuple = RateDistortionTuple::new(b.rx, b.ry, b.dx, b.dy)?;
            let args = BoundsArgs {
                joint: &b.joint,
                x_distortion: b.x_distortion.as_deref(),
                y_distortion: b.y_distortion.as_deref(),
                tuple,
            };
            commands::bounds(args, &cfg()?)?
        }
        Command::GaussFigures { rho, grid } => {
            let summary = commands::gauss_figures(rho, &grid.0, cli.out.as_ref())?;
            // The CSV took standard output if no file was given.
            if out.is_none() {
                eprintln!(
                    "{}",
                    serde_json::to_string(&summary).expect("summary serializes")
                );
                return Ok(());
            }
            return output::write_json(&summary, None);
        }
        Command::Ceo {
            rates,
            sstars,
            target,
        } => commands::ceo(rates, sstars, target)?,
        Command::Cr {
            rate,
            capacity,
            sstar,
        } => commands::cr(rate, capacity, sstar)?,
    };
    output::write_json(&value, out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
