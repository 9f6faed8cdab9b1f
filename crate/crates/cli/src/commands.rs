//! Subcommand bodies. Each writes its files under `spec.out_path`, prints a
//! short summary and returns the process exit code.

use std::io::Write;

use clap::Args;
use difb_core::solvers::{validate_assumption_b, AssumptionReport, DifbParams, DifbSettings};

use crate::config::RunSpec;
use crate::error::{CliError, Result};
use crate::experiments::{run_classification, run_regression, run_trace};
use crate::output::{
    write_class_report, write_classification_summary, write_confusion, write_predictions,
    write_results, write_trace,
};

fn prepare_out(spec: &RunSpec) -> Result<()> {
    std::fs::create_dir_all(&spec.out_path).map_err(|e| CliError::io(&spec.out_path, e))
}

fn console(out: &mut dyn Write, line: std::fmt::Arguments<'_>) -> Result<()> {
    out.write_fmt(line)
        .and_then(|_| out.write_all(b"\n"))
        .map_err(|e| CliError::io("<stdout>", e))
}

/// Writes `results.csv` (grid metrics), `train_results.csv` and
/// `predictions.csv`. Exit code 2 when any solver failed.
pub fn cmd_regress(spec: &RunSpec, out: &mut dyn Write) -> Result<i32> {
    prepare_out(spec)?;
    let outcome = run_regression(spec)?;
    let dir = &spec.out_path;
    write_results(&dir.join("results.csv"), &outcome.eval_rows)?;
    write_results(&dir.join("train_results.csv"), &outcome.train_rows)?;
    write_predictions(&dir.join("predictions.csv"), &outcome)?;

    console(out, format_args!(
        "{:<10} {:>12} {:>14} {:>14} {:>12}",
        "algorithm", "cpu_time_s", "train_mse", "grid_mse", "grid_r2"
    ))?;
    for row in &outcome.eval_rows {
        let train = outcome.train_rows.iter().find(|r| r.algorithm == row.algorithm);
        match (row.report, train.and_then(|t| t.report)) {
            (Some(g), Some(t)) => console(out, format_args!(
                "{:<10} {:>12.4e} {:>14.6e} {:>14.6e} {:>12.6}",
                row.algorithm.name(), row.cpu_time_s, t.mse, g.mse, g.r2
            ))?,
            _ => console(out, format_args!(
                "{:<10} failed: {}",
                row.algorithm.name(),
                row.failure.as_deref().unwrap_or("unknown error")
            ))?,
        }
    }
    Ok(if outcome.failures().is_empty() { 0 } else { 2 })
}

/// Writes `classification.csv` plus `{alg}_confusion_{train,test}.csv` and
/// `{alg}_report_{train,test}.csv`.
pub fn cmd_classify(spec: &RunSpec, out: &mut dyn Write) -> Result<i32> {
    prepare_out(spec)?;
    let outcome = run_classification(spec)?;
    let dir = &spec.out_path;
    write_classification_summary(&dir.join("classification.csv"), &outcome)?;
    let mut failed = false;
    for run in &outcome.runs {
        let name = run.algorithm.name();
        match (&run.train, &run.test) {
            (Some(train), Some(test)) => {
                for (part, report) in [("train", train), ("test", test)] {
                    write_confusion(&dir.join(format!("{name}_confusion_{part}.csv")), &outcome.class_names, report)?;
                    write_class_report(&dir.join(format!("{name}_report_{part}.csv")), &outcome.class_names, report)?;
                }
                console(out, format_args!(
                    "{name:<10} train accuracy {:.4} ({} samples), test accuracy {:.4} ({} samples)",
                    train.accuracy, outcome.n_train, test.accuracy, outcome.n_test
                ))?;
            }
            _ => {
                failed = true;
                console(out, format_args!(
                    "{name:<10} failed: {}",
                    run.failure.as_deref().unwrap_or("unknown error")
                ))?;
            }
        }
    }
    Ok(if failed { 2 } else { 0 })
}

/// Writes `trace_{alg}.csv` for each algorithm.
pub fn cmd_trace(spec: &RunSpec, out: &mut dyn Write) -> Result<i32> {
    prepare_out(spec)?;
    let mut failed = false;
    for (algorithm, table) in run_trace(spec)? {
        let path = spec.out_path.join(format!("trace_{}.csv", algorithm.name()));
        match table {
            Ok(t) => {
                write_trace(&path, &t)?;
                console(out, format_args!("{:<10} {} iterations -> {}", algorithm.name(), t.residuals.len(), path.display()))?;
            }
            Err(e) => {
                failed = true;
                console(out, format_args!("{:<10} failed: {e}", algorithm.name()))?;
            }
        }
    }
    Ok(if failed { 2 } else { 0 })
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// Cocoercivity constant of A
    #[arg(long)]
    pub alpha: f64,
    /// Resolvent step (absolute, not scaled by alpha)
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.0)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub delta: f64,
    #[arg(long = "eps-lo", default_value_t = DifbSettings::default().eps_lo)]
    pub eps_lo: f64,
    #[arg(long = "eps-hi", default_value_t = DifbSettings::default().eps_hi)]
    pub eps_hi: f64,
}

pub fn validate_report(args: &ValidateArgs) -> Result<AssumptionReport> {
    if !(args.alpha > 0.0) {
        return Err(CliError::Usage(format!("--alpha must be positive, got {}", args.alpha)));
    }
    let params = DifbParams::new(args.lambda, args.theta, args.delta, args.eps_lo, args.eps_hi);
    Ok(validate_assumption_b(args.alpha, &params))
}

/// Prints the clause-by-clause report; exit code 2 when any clause fails.
pub fn cmd_validate(args: &ValidateArgs, out: &mut dyn Write) -> Result<i32> {
    let report = validate_report(args)?;
    console(out, format_args!("{report}"))?;
    Ok(if report.is_ok() { 0 } else { 2 })
}
