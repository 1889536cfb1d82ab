//! Command-line front end. Exit status: 0 when every check passes, 2 when a
//! check exceeds its tolerance, 3 for invalid input.

mod commands;
mod config;
mod output;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{AlphaArgs, Outcome};
use config::CommonArgs;

const TOLERANCE: u8 = 2;
const INPUT: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "multitime", version, about = "Multi-time Dirac wave functions with boundary phases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the (boosted) solution on a grid and integrate its norm.
    Solve(CommonArgs),
    /// Run every consistency check.
    Verify(CommonArgs),
    /// Boundary condition and norm after a Lorentz boost.
    Boost(CommonArgs),
    /// Schmidt rank of a two-particle state over time.
    Entangle {
        #[command(flatten)]
        common: CommonArgs,
        /// Relative cutoff for singular values.
        #[arg(long, default_value_t = 1e-8)]
        svd_tol: f64,
    },
    /// One-sided limits across the contact line in the single-time picture.
    DeltaCheck {
        #[command(flatten)]
        common: CommonArgs,
        /// Extrapolation step.
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Minimum-distance construction and its conflicting evaluations.
    AlphaDemo {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        alpha: AlphaArgs,
    },
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Solve(a) => commands::solve(&a),
        Command::Verify(a) => verify::verify(&a),
        Command::Boost(a) => commands::boost(&a),
        Command::Entangle { common, svd_tol } => commands::entangle(&common, svd_tol),
        Command::DeltaCheck { common, eps } => commands::delta_check(&common, eps),
        Command::AlphaDemo { common, alpha } => commands::alpha_demo(&common, &alpha),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(INPUT) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(outcome) => match output::to_json(&outcome.summary) {
            Ok(text) => {
                print!("{text}");
                if outcome.pass {
                    ExitCode::SUCCESS
                } else {
                    eprintln!("error: a check exceeded its tolerance");
                    ExitCode::from(TOLERANCE)
                }
            }
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(INPUT)
            }
        },
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(INPUT)
        }
    }
}
