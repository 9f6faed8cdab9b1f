//! CSV emission. Reals are written in scientific notation with 9
//! significant digits; failed runs leave their metric fields empty.

use std::fs::File;
use std::path::Path;

use csv::Writer;
use difb_core::metrics::ClassificationReport;

use crate::error::{CliError, Result};
use crate::experiments::{ClassificationOutcome, RegressionOutcome, ResultRow, TraceTable};

pub const RESULTS_HEADER: [&str; 6] = ["algorithm", "cpu_time_s", "mse", "rmse", "r2", "mae"];
pub const TRACE_HEADER: [&str; 5] = ["iter", "residual", "step_diff", "gamma", "gamma_bar"];

pub fn fmt_real(v: f64) -> String {
    format!("{v:.8e}")
}

fn create(path: &Path) -> Result<Writer<File>> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    Ok(Writer::from_writer(file))
}

fn finish(mut w: Writer<File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_results(path: &Path, rows: &[ResultRow]) -> Result<()> {
    let mut w = create(path)?;
    w.write_record(RESULTS_HEADER)?;
    for row in rows {
        let mut rec = vec![row.algorithm.name().to_string(), fmt_real(row.cpu_time_s)];
        match row.report {
            Some(r) => rec.extend([r.mse, r.rmse, r.r2, r.mae].map(fmt_real)),
            None => rec.extend(std::iter::repeat_n(String::new(), 4)),
        }
        w.write_record(&rec)?;
    }
    finish(w, path)
}

/// `x,sin_x,<algorithm>…` on the evaluation grid.
pub fn write_predictions(path: &Path, outcome: &RegressionOutcome) -> Result<()> {
    let mut w = create(path)?;
    let mut header = vec!["x".to_string(), "sin_x".to_string()];
    header.extend(outcome.predictions.iter().map(|(a, _)| a.name().to_string()));
    w.write_record(&header)?;
    for (i, &x) in outcome.grid.iter().enumerate() {
        let mut rec = vec![fmt_real(x), fmt_real(x.sin())];
        rec.extend(
            outcome
                .predictions
                .iter()
                .map(|(_, p)| p.as_ref().map_or(String::new(), |p| fmt_real(p[i]))),
        );
        w.write_record(&rec)?;
    }
    finish(w, path)
}

/// Rows are true classes, columns predicted classes.
pub fn write_confusion(path: &Path, names: &[String], report: &ClassificationReport) -> Result<()> {
    let mut w = create(path)?;
    let mut header = vec!["true\\predicted".to_string()];
    header.extend(names.iter().cloned());
    w.write_record(&header)?;
    for (name, row) in names.iter().zip(&report.confusion) {
        let mut rec = vec![name.clone()];
        rec.extend(row.iter().map(|c| c.to_string()));
        w.write_record(&rec)?;
    }
    finish(w, path)
}

/// Per-class precision, recall, F1 and support, then an accuracy row.
/// `degenerate` names the metrics whose denominator was zero.
pub fn write_class_report(path: &Path, names: &[String], report: &ClassificationReport) -> Result<()> {
    let mut w = create(path)?;
    w.write_record(["class", "precision", "recall", "f1", "support", "degenerate"])?;
    for (name, m) in names.iter().zip(&report.per_class) {
        let flags: Vec<&str> = [(m.precision_degenerate, "precision"), (m.recall_degenerate, "recall")]
            .iter()
            .filter(|(on, _)| *on)
            .map(|(_, n)| *n)
            .collect();
        w.write_record([
            name.clone(),
            fmt_real(m.precision),
            fmt_real(m.recall),
            fmt_real(m.f1),
            m.support.to_string(),
            flags.join(";"),
        ])?;
    }
    w.write_record([
        "accuracy".to_string(),
        String::new(),
        String::new(),
        fmt_real(report.accuracy),
        report.total_support.to_string(),
        String::new(),
    ])?;
    finish(w, path)
}

pub fn write_classification_summary(path: &Path, outcome: &ClassificationOutcome) -> Result<()> {
    let mut w = create(path)?;
    w.write_record(["algorithm", "cpu_time_s", "train_accuracy", "test_accuracy", "n_train", "n_test"])?;
    for run in &outcome.runs {
        let acc = |r: &Option<ClassificationReport>| r.as_ref().map_or(String::new(), |r| fmt_real(r.accuracy));
        w.write_record([
            run.algorithm.name().to_string(),
            fmt_real(run.cpu_time_s),
            acc(&run.train),
            acc(&run.test),
            outcome.n_train.to_string(),
            outcome.n_test.to_string(),
        ])?;
    }
    finish(w, path)
}

pub fn write_trace(path: &Path, table: &TraceTable) -> Result<()> {
    let mut w = create(path)?;
    w.write_record(TRACE_HEADER)?;
    let opt = |s: &Option<Vec<f64>>, i: usize| s.as_ref().map_or(String::new(), |s| fmt_real(s[i]));
    for i in 0..table.residuals.len() {
        w.write_record([
            (i + 1).to_string(),
            fmt_real(table.residuals[i]),
            fmt_real(table.step_diffs[i]),
            opt(&table.gamma, i),
            opt(&table.gamma_bar, i),
        ])?;
    }
    finish(w, path)
}
