//! Regression errors and classification reports.

use crate::error::{Error, Result};
use crate::linalg::{DenseVector, LinalgError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegressionReport {
    pub mse: f64,
    pub rmse: f64,
    pub mae: f64,
    pub r2: f64,
    pub cpu_time_s: f64,
}

/// MSE, RMSE, MAE and `R² = 1 − Σ(ŷ − y)²/Σ(y − ȳ)²`.
///
/// Fails when `y_true` is constant, since `R²` is then undefined.
pub fn regression_metrics(
    y_true: &DenseVector,
    y_pred: &DenseVector,
    cpu_time_s: f64,
) -> Result<RegressionReport> {
    if y_true.len() != y_pred.len() {
        return Err(LinalgError::DimensionMismatch {
            op: "regression_metrics",
            left: format!("y_true[{}]", y_true.len()),
            right: format!("y_pred[{}]", y_pred.len()),
        }
        .into());
    }
    let n = y_true.len();
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "regression metrics need at least 2 samples, got {n}"
        )));
    }
    let nf = n as f64;
    let mean = y_true.iter().sum::<f64>() / nf;
    let (mut sse, mut sae, mut sst) = (0.0, 0.0, 0.0);
    for (&y, &p) in y_true.iter().zip(y_pred.iter()) {
        let e = p - y;
        sse += e * e;
        sae += e.abs();
        sst += (y - mean) * (y - mean);
    }
    if sst == 0.0 {
        return Err(Error::InvalidParameter(
            "targets have zero variance, R² is undefined".into(),
        ));
    }
    let mse = sse / nf;
    Ok(RegressionReport {
        mse,
        rmse: mse.sqrt(),
        mae: sae / nf,
        r2: 1.0 - sse / sst,
        cpu_time_s,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
    /// No sample was predicted as this class; precision reported as 0.
    pub precision_degenerate: bool,
    /// No sample belongs to this class; recall reported as 0.
    pub recall_degenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    /// `confusion[true][predicted]`.
    pub confusion: Vec<Vec<usize>>,
    pub per_class: Vec<ClassMetrics>,
    pub accuracy: f64,
    pub total_support: usize,
}

impl ClassificationReport {
    pub fn n_classes(&self) -> usize {
        self.confusion.len()
    }
}

fn ratio(num: usize, den: usize) -> (f64, bool) {
    if den == 0 {
        (0.0, true)
    } else {
        (num as f64 / den as f64, false)
    }
}

pub fn classification_metrics(
    y_true: &[usize],
    y_pred: &[usize],
    n_classes: usize,
) -> Result<ClassificationReport> {
    if y_true.len() != y_pred.len() {
        return Err(LinalgError::DimensionMismatch {
            op: "classification_metrics",
            left: format!("y_true[{}]", y_true.len()),
            right: format!("y_pred[{}]", y_pred.len()),
        }
        .into());
    }
    if y_true.is_empty() {
        return Err(Error::InvalidParameter("no samples to score".into()));
    }
    let mut confusion = vec![vec![0usize; n_classes]; n_classes];
    for (&t, &p) in y_true.iter().zip(y_pred) {
        for label in [t, p] {
            if label >= n_classes {
                return Err(Error::LabelOutOfRange { label, n_classes });
            }
        }
        confusion[t][p] += 1;
    }
    let per_class = (0..n_classes)
        .map(|c| {
            let tp = confusion[c][c];
            let support: usize = confusion[c].iter().sum();
            let predicted: usize = confusion.iter().map(|row| row[c]).sum();
            let (precision, precision_degenerate) = ratio(tp, predicted);
            let (recall, recall_degenerate) = ratio(tp, support);
            let f1 = if precision + recall > 0.0 {
                2.0 * precision * recall / (precision + recall)
            } else {
                0.0
            };
            ClassMetrics { precision, recall, f1, support, precision_degenerate, recall_degenerate }
        })
        .collect();
    let correct: usize = (0..n_classes).map(|c| confusion[c][c]).sum();
    Ok(ClassificationReport {
        confusion,
        per_class,
        accuracy: correct as f64 / y_true.len() as f64,
        total_support: y_true.len(),
    })
}
