//! Command-line front end: shock solving and checking, Hugoniot sampling,
//! the two-variation gap demo, bulk-residual tables, Riemann problems, and
//! tangent-map decomposition.
//!
//! Machine-readable results go to standard output; diagnostics go to the
//! error stream. Exit codes: 0 success (all reported residuals below
//! tolerance), 1 usage error, 2 physics or domain error.

// `!(x > 0.0)` rejects NaN along with nonpositive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod cmd_kinematics;
mod cmd_riemann;
mod cmd_shock;
mod cmd_tensor;
mod output;
mod settings;

use output::CliError;
use settings::Settings;

#[derive(Parser)]
#[command(
    name = "rhkit",
    version,
    about = "Shock relations and space-time tensor checks for conservative fluids",
    disable_help_subcommand = true
)]
struct Cli {
    /// Configuration file (JSON): eos_path, tolerances, output_format, seed.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Shock-wave computations.
    #[command(subcommand)]
    Shock(ShockCommand),
    /// Bulk-equation residual tables on smooth fields.
    #[command(subcommand)]
    Tensor(TensorCommand),
    /// Exact 1-D Riemann problems.
    #[command(subcommand)]
    Riemann(RiemannCommand),
    /// Tangent-map utilities.
    #[command(subcommand)]
    Kinematics(KinematicsCommand),
}

#[derive(Subcommand)]
enum ShockCommand {
    /// Solve the downstream state of a shock.
    Solve(cmd_shock::SolveArgs),
    /// Evaluate residuals and admissibility of a given pair.
    Check(cmd_shock::CheckArgs),
    /// Sample the Hugoniot locus as CSV.
    Hugoniot(cmd_shock::HugoniotArgs),
    /// Exhibit the gap between the two variational surface terms.
    GapDemo(cmd_shock::GapDemoArgs),
}

#[derive(Subcommand)]
enum TensorCommand {
    /// Emit residual tables for a manufactured or user-specified field.
    Check(cmd_tensor::CheckArgs),
}

#[derive(Subcommand)]
enum RiemannCommand {
    /// Solve a Riemann problem and sample the self-similar solution.
    Solve(cmd_riemann::SolveArgs),
}

#[derive(Subcommand)]
enum KinematicsCommand {
    /// Decompose a 4x4 tangent map into blocks, velocity, and deformation.
    Decompose(cmd_kinematics::DecomposeArgs),
}

/// Arguments shared by the commands that need an equation of state.
#[derive(Args)]
pub struct EosArg {
    /// EOS parameter file (JSON); falls back to the config's eos_path.
    #[arg(long)]
    eos: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // explicit --help/--version succeed; everything else, including a
            // bare invocation, is a usage error
            use clap::error::ErrorKind;
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                print!("{err}");
                return ExitCode::SUCCESS;
            }
            eprint!("{err}");
            return ExitCode::from(1);
        }
    };

    let settings = match Settings::load(cli.config.as_deref()) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };

    let result = match cli.command {
        Command::Shock(ShockCommand::Solve(args)) => cmd_shock::solve(&args, &settings),
        Command::Shock(ShockCommand::Check(args)) => cmd_shock::check(&args, &settings),
        Command::Shock(ShockCommand::Hugoniot(args)) => cmd_shock::hugoniot(&args, &settings),
        Command::Shock(ShockCommand::GapDemo(args)) => cmd_shock::gap_demo(&args, &settings),
        Command::Tensor(TensorCommand::Check(args)) => cmd_tensor::check(&args, &settings),
        Command::Riemann(RiemannCommand::Solve(args)) => cmd_riemann::solve(&args, &settings),
        Command::Kinematics(KinematicsCommand::Decompose(args)) => {
            cmd_kinematics::decompose(&args, &settings)
        }
    };

    match result {
        Ok(passed) => {
            if passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("rhkit: reported residuals exceed tolerance");
                ExitCode::from(2)
            }
        }
        Err(e) => fail(e),
    }
}

fn fail(e: CliError) -> ExitCode {
    match e {
        CliError::Usage(msg) => {
            eprintln!("rhkit: {msg}");
            ExitCode::from(1)
        }
        CliError::Physics { .. } => {
            println!("{}", e.to_json());
            eprintln!("rhkit: {e}");
            ExitCode::from(2)
        }
    }
}
