use std::process::ExitCode;

use clap::{Parser, Subcommand};
use difb_cli::commands::{cmd_classify, cmd_regress, cmd_trace, cmd_validate, ValidateArgs};
use difb_cli::config::{Experiment, RunArgs, RunSpec};

/// ELM experiments trained with a double-inertial forward-backward solver
/// and its baselines.
#[derive(Debug, Parser)]
#[command(name = "difb", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit sin(x) on [0, 2π] and report MSE, RMSE, R² and MAE per algorithm
    Regress(RunArgs),
    /// Train on an Iris CSV and report confusion matrices for both partitions
    Classify(RunArgs),
    /// Write per-iteration residuals and Lyapunov values for the sine problem
    Trace(RunArgs),
    /// Check inertial parameters against the convergence conditions
    Validate(ValidateArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let mut stdout = std::io::stdout().lock();
    let result = match &cli.command {
        Command::Regress(args) => RunSpec::resolve(Experiment::Regress, args)
            .and_then(|spec| cmd_regress(&spec, &mut stdout)),
        Command::Classify(args) => RunSpec::resolve(Experiment::Classify, args)
            .and_then(|spec| cmd_classify(&spec, &mut stdout)),
        Command::Trace(args) => RunSpec::resolve(Experiment::Trace, args)
            .and_then(|spec| cmd_trace(&spec, &mut stdout)),
        Command::Validate(args) => cmd_validate(args, &mut stdout),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
