//! Regression, classification and trace runs. Every algorithm in a run sees
//! the same data and the same hidden layer.

use std::sync::Arc;

use difb_core::elm::{
    argmax_decode, elm_init, elm_predict, elm_train_on_hidden, hidden_matrix, one_hot,
    ElmArchitecture, ElmModel,
};
use difb_core::linalg::{DenseMatrix, DenseVector};
use difb_core::metrics::{
    classification_metrics, regression_metrics, ClassificationReport, RegressionReport,
};
use difb_core::operators::{LeastSquaresData, SplitProblem};
use difb_core::solvers::{
    solve_difb, solve_lasso, Algorithm, LassoSolver, SolverConfig, SolverTrace,
};
use sha2::{Digest, Sha256};

use crate::config::RunSpec;
use crate::datasets::{
    eval_grid, gen_sine_dataset, load_iris_csv, select_rows, stratified_split, IRIS_CLASSES,
};
use crate::error::{CliError, Result};

/// The hidden layer is seeded from the run seed plus this offset so that it
/// is not drawn from the same stream as the sine inputs.
pub const HIDDEN_SEED_OFFSET: u64 = 1;

/// One algorithm's metrics; `report` is `None` when the solver failed.
#[derive(Debug, Clone)]
pub struct ResultRow {
    pub algorithm: Algorithm,
    pub cpu_time_s: f64,
    pub report: Option<RegressionReport>,
    pub failure: Option<String>,
}

#[derive(Debug, Clone)]
pub struct RegressionOutcome {
    /// Metrics on the evaluation grid, sorted by ascending MSE.
    pub eval_rows: Vec<ResultRow>,
    /// Metrics on the training samples, sorted by ascending MSE.
    pub train_rows: Vec<ResultRow>,
    pub grid: Vec<f64>,
    /// Grid predictions per algorithm in run order (`None` on failure).
    pub predictions: Vec<(Algorithm, Option<Vec<f64>>)>,
    /// SHA-256 of the hidden matrix each algorithm trained on, in run order.
    pub hidden_hashes: Vec<(Algorithm, String)>,
}

impl RegressionOutcome {
    pub fn failures(&self) -> Vec<&ResultRow> {
        self.eval_rows.iter().filter(|r| r.report.is_none()).collect()
    }
}

pub fn hash_matrix(m: &DenseMatrix) -> String {
    let mut hasher = Sha256::new();
    hasher.update((m.rows() as u64).to_le_bytes());
    hasher.update((m.cols() as u64).to_le_bytes());
    for v in m.as_slice() {
        hasher.update(v.to_le_bytes());
    }
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn architecture(spec: &RunSpec, n_inputs: usize) -> Result<ElmArchitecture> {
    Ok(ElmArchitecture::new(
        n_inputs,
        spec.n_hidden,
        spec.activation,
        spec.seed.wrapping_add(HIDDEN_SEED_OFFSET),
    )?)
}

fn column(values: Vec<f64>) -> DenseMatrix {
    let n = values.len();
    DenseMatrix::new(n, 1, values).expect("finite column")
}

/// Sorts rows by MSE; failed rows go last, ties keep run order.
pub fn sort_rows(rows: &mut [ResultRow]) {
    rows.sort_by(|a, b| {
        let key = |r: &ResultRow| r.report.map_or(f64::INFINITY, |m| m.mse);
        key(a).total_cmp(&key(b))
    });
}

/// Trains each algorithm on `spec.n_samples` sine points and scores it on
/// the training points and on a 200-point grid over `[0, 2π]`.
pub fn run_regression(spec: &RunSpec) -> Result<RegressionOutcome> {
    let (x, y) = gen_sine_dataset(spec.n_samples, spec.seed)?;
    let targets = column(y.as_slice().to_vec());
    let grid = eval_grid();
    let grid_x = column(grid.clone());
    let grid_y = DenseVector::from_vec_unchecked(grid.iter().map(|v| v.sin()).collect());
    let arch = architecture(spec, 1)?;
    let cfg = SolverConfig::zeros(spec.n_hidden).with_max_iters(spec.iterations);

    let mut eval_rows = Vec::new();
    let mut train_rows = Vec::new();
    let mut predictions = Vec::new();
    let mut hidden_hashes = Vec::new();
    for &algorithm in &spec.algorithms {
        let model = elm_init(arch);
        let h = hidden_matrix(&model, &x)?;
        hidden_hashes.push((algorithm, hash_matrix(&h)));
        let solver = spec.solver(algorithm);
        match elm_train_on_hidden(&model, h, &targets, spec.mu, &solver, &cfg) {
            Ok((trained, traces)) => {
                let cpu = traces.iter().map(|t| t.elapsed_seconds).sum();
                let score = |inputs: &DenseMatrix, truth: &DenseVector| -> Result<(RegressionReport, Vec<f64>)> {
                    let pred = elm_predict(&trained, inputs)?.as_slice().to_vec();
                    let report =
                        regression_metrics(truth, &DenseVector::from_vec_unchecked(pred.clone()), cpu)?;
                    Ok((report, pred))
                };
                let (train_report, _) = score(&x, &y)?;
                let (eval_report, grid_pred) = score(&grid_x, &grid_y)?;
                train_rows.push(ResultRow { algorithm, cpu_time_s: cpu, report: Some(train_report), failure: None });
                eval_rows.push(ResultRow { algorithm, cpu_time_s: cpu, report: Some(eval_report), failure: None });
                predictions.push((algorithm, Some(grid_pred)));
            }
            Err(e) => {
                let failed = ResultRow { algorithm, cpu_time_s: 0.0, report: None, failure: Some(e.to_string()) };
                train_rows.push(failed.clone());
                eval_rows.push(failed);
                predictions.push((algorithm, None));
            }
        }
    }
    sort_rows(&mut eval_rows);
    sort_rows(&mut train_rows);
    Ok(RegressionOutcome { eval_rows, train_rows, grid, predictions, hidden_hashes })
}

#[derive(Debug, Clone)]
pub struct ClassificationRun {
    pub algorithm: Algorithm,
    pub cpu_time_s: f64,
    pub train: Option<ClassificationReport>,
    pub test: Option<ClassificationReport>,
    pub failure: Option<String>,
}

#[derive(Debug, Clone)]
pub struct ClassificationOutcome {
    pub class_names: Vec<String>,
    pub n_train: usize,
    pub n_test: usize,
    pub runs: Vec<ClassificationRun>,
}

/// Stratified split of the Iris file, one-hot targets, one LASSO per class
/// column, argmax decoding; reports on both partitions.
pub fn run_classification(spec: &RunSpec) -> Result<ClassificationOutcome> {
    let path = spec
        .data_path
        .as_ref()
        .ok_or_else(|| CliError::Usage("classify needs --data PATH".into()))?;
    let (x, labels) = load_iris_csv(path)?;
    let n_classes = IRIS_CLASSES.len();
    let (train_idx, test_idx) = stratified_split(&labels, n_classes, spec.split_fraction, spec.seed)?;
    let x_train = select_rows(&x, &train_idx);
    let x_test = select_rows(&x, &test_idx);
    let y_train: Vec<usize> = train_idx.iter().map(|&i| labels[i]).collect();
    let y_test: Vec<usize> = test_idx.iter().map(|&i| labels[i]).collect();
    let targets = one_hot(&y_train, n_classes)?;
    let arch = architecture(spec, x.cols())?;
    let cfg = SolverConfig::zeros(spec.n_hidden).with_max_iters(spec.iterations);

    let mut runs = Vec::new();
    for &algorithm in &spec.algorithms {
        let model = elm_init(arch);
        let h = hidden_matrix(&model, &x_train)?;
        match elm_train_on_hidden(&model, h, &targets, spec.mu, &spec.solver(algorithm), &cfg) {
            Ok((trained, traces)) => {
                let report = |inputs: &DenseMatrix, truth: &[usize]| -> Result<ClassificationReport> {
                    let decoded = argmax_decode(&elm_predict(&trained, inputs)?);
                    Ok(classification_metrics(truth, &decoded, n_classes)?)
                };
                runs.push(ClassificationRun {
                    algorithm,
                    cpu_time_s: traces.iter().map(|t| t.elapsed_seconds).sum(),
                    train: Some(report(&x_train, &y_train)?),
                    test: Some(report(&x_test, &y_test)?),
                    failure: None,
                });
            }
            Err(e) => runs.push(ClassificationRun {
                algorithm,
                cpu_time_s: 0.0,
                train: None,
                test: None,
                failure: Some(e.to_string()),
            }),
        }
    }
    Ok(ClassificationOutcome {
        class_names: IRIS_CLASSES.iter().map(|s| s.to_string()).collect(),
        n_train: train_idx.len(),
        n_test: test_idx.len(),
        runs,
    })
}

/// Per-iteration diagnostics of one solver run.
#[derive(Debug, Clone, Default)]
pub struct TraceTable {
    pub residuals: Vec<f64>,
    pub step_diffs: Vec<f64>,
    /// `Γ_k` and `Γ̄_k` aligned with the iterations (double-inertial runs only).
    pub gamma: Option<Vec<f64>>,
    pub gamma_bar: Option<Vec<f64>>,
}

impl TraceTable {
    fn from_trace(trace: &SolverTrace) -> Self {
        // series[0] belongs to the initial point, series[k] to iterate k
        let shift = |s: &Vec<f64>| s[1..].to_vec();
        TraceTable {
            residuals: trace.residuals.clone(),
            step_diffs: trace.step_diffs.clone(),
            gamma: trace.lyapunov.as_ref().map(|l| shift(&l.gamma_series)),
            gamma_bar: trace.lyapunov.as_ref().map(|l| shift(&l.gamma_bar_series)),
        }
    }
}

/// Runs each algorithm on the LASSO problem of the regression setup (sine
/// data, shared hidden layer) and keeps per-iteration diagnostics. With a
/// zero iteration budget the tables are empty.
pub fn run_trace(spec: &RunSpec) -> Result<Vec<(Algorithm, std::result::Result<TraceTable, String>)>> {
    let (x, y) = gen_sine_dataset(spec.n_samples, spec.seed)?;
    let model: ElmModel = elm_init(architecture(spec, 1)?);
    let data = Arc::new(LeastSquaresData::new(hidden_matrix(&model, &x)?, y)?);
    let mut out = Vec::new();
    for &algorithm in &spec.algorithms {
        if spec.iterations == 0 {
            out.push((algorithm, Ok(TraceTable::default())));
            continue;
        }
        let cfg = SolverConfig::zeros(spec.n_hidden).with_max_iters(spec.iterations);
        let result = match spec.solver(algorithm) {
            LassoSolver::Difb(settings) => {
                let problem = SplitProblem::lasso(data.clone(), spec.mu)?;
                let params = settings.resolve(problem.alpha())?;
                solve_difb(&problem, &params, &cfg.with_record_iterates(true))
            }
            solver => solve_lasso(data.clone(), spec.mu, &solver, &cfg),
        };
        out.push((algorithm, result.map(|t| TraceTable::from_trace(&t)).map_err(|e| e.to_string())));
    }
    Ok(out)
}
