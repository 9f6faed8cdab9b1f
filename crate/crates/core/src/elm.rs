//! Extreme learning machines: a single random hidden layer with output
//! weights fitted by LASSO.
//!
//! # Weight generator
//!
//! Input weights and biases come from SplitMix64 so that any port can
//! reproduce them:
//!
//! ```text
//! state ← state + 0x9E3779B97F4A7C15           (mod 2⁶⁴, state₀ = seed)
//! z ← state
//! z ← (z ⊕ (z ≫ 30)) · 0xBF58476D1CE4E5B9
//! z ← (z ⊕ (z ≫ 27)) · 0x94D049BB133111EB
//! out ← z ⊕ (z ≫ 31)
//! u = (out ≫ 11) · 2⁻⁵³                        ∈ [0, 1)
//! ```
//!
//! A draw on `[a, b]` is `a + (b − a)·u`. [`elm_init`] draws the input
//! weights row-major (`n_hidden × n_inputs`) and then the biases, all on
//! `[−1, 1]`.
//!
//! # Model file
//!
//! ```text
//! elm n_inputs=<n> n_hidden=<h> n_outputs=<m> activation=<linear|sigmoid> seed=<s>
//! <h lines of n input weights>
//! <1 line of h biases>
//! <h lines of m output weights>        (absent when n_outputs=0, i.e. untrained)
//! ```
//!
//! Values are whitespace-separated decimal floats printed with the shortest
//! representation that round-trips.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, DenseVector, LinalgError};
use crate::operators::LeastSquaresData;
use crate::solvers::{solve_lasso, LassoSolver, SolverConfig, SolverTrace};

/// Default hidden nodes for regression runs.
pub const DEFAULT_HIDDEN_REGRESSION: usize = 20;
/// Default hidden nodes for classification runs.
pub const DEFAULT_HIDDEN_CLASSIFICATION: usize = 50;
/// Default ℓ1 weight on the output weights.
pub const DEFAULT_MU: f64 = 1e-4;

/// Seeded uniform source backed by SplitMix64; see the module docs.
#[derive(Debug, Clone)]
pub struct UniformSource {
    rng: SplitMix64,
}

impl UniformSource {
    pub fn new(seed: u64) -> Self {
        Self { rng: SplitMix64::seed_from_u64(seed) }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_unit()
    }

    /// Uniform index in `0..n` as `⌊u·n⌋` (`n ≥ 1`).
    pub fn index(&mut self, n: usize) -> usize {
        ((self.next_unit() * n as f64) as usize).min(n - 1)
    }

    /// Fisher–Yates: for `i = len−1, …, 1` swap `i` with `index(i + 1)`.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.index(i + 1);
            items.swap(i, j);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Activation {
    Linear,
    Sigmoid,
}

impl Activation {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Linear => x,
            Activation::Sigmoid => 1.0 / (1.0 + (-x).exp()),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Activation::Linear => "linear",
            Activation::Sigmoid => "sigmoid",
        }
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Activation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "linear" => Ok(Activation::Linear),
            "sigmoid" => Ok(Activation::Sigmoid),
            _ => Err(Error::InvalidParameter(format!(
                "unknown activation '{s}' (expected linear or sigmoid)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ElmArchitecture {
    pub n_inputs: usize,
    pub n_hidden: usize,
    pub activation: Activation,
    pub seed: u64,
}

impl ElmArchitecture {
    pub fn new(n_inputs: usize, n_hidden: usize, activation: Activation, seed: u64) -> Result<Self> {
        if n_inputs == 0 || n_hidden == 0 {
            return Err(Error::InvalidParameter(format!(
                "need at least one input and one hidden node, got {n_inputs} and {n_hidden}"
            )));
        }
        Ok(Self { n_inputs, n_hidden, activation, seed })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElmModel {
    pub arch: ElmArchitecture,
    /// `n_hidden × n_inputs`.
    pub input_weights: DenseMatrix,
    pub biases: DenseVector,
    /// `n_hidden × n_outputs`; `None` until trained.
    pub output_weights: Option<DenseMatrix>,
}

/// Draws the hidden layer from `arch.seed`.
pub fn elm_init(arch: ElmArchitecture) -> ElmModel {
    let mut rng = UniformSource::new(arch.seed);
    let weights = (0..arch.n_hidden * arch.n_inputs)
        .map(|_| rng.uniform(-1.0, 1.0))
        .collect();
    let biases = (0..arch.n_hidden).map(|_| rng.uniform(-1.0, 1.0)).collect();
    ElmModel {
        arch,
        input_weights: DenseMatrix::new(arch.n_hidden, arch.n_inputs, weights)
            .expect("generated weights have the declared shape"),
        biases: DenseVector::from_vec_unchecked(biases),
        output_weights: None,
    }
}

/// `H[i, j] = g(⟨W_j, x_i⟩ + b_j)`.
pub fn hidden_matrix(model: &ElmModel, x: &DenseMatrix) -> Result<DenseMatrix> {
    let arch = &model.arch;
    if x.cols() != arch.n_inputs {
        return Err(LinalgError::DimensionMismatch {
            op: "hidden_matrix",
            left: format!("inputs[{}x{}]", x.rows(), x.cols()),
            right: format!("input_weights[{}x{}]", arch.n_hidden, arch.n_inputs),
        }
        .into());
    }
    let mut data = Vec::with_capacity(x.rows() * arch.n_hidden);
    for i in 0..x.rows() {
        let xi = x.row(i);
        for j in 0..arch.n_hidden {
            let pre: f64 = model
                .input_weights
                .row(j)
                .iter()
                .zip(xi)
                .map(|(w, v)| w * v)
                .sum::<f64>()
                + model.biases[j];
            data.push(arch.activation.apply(pre));
        }
    }
    Ok(DenseMatrix::new(x.rows(), arch.n_hidden, data)?)
}

/// Fits one LASSO problem per target column on the shared hidden matrix.
/// Columns run on separate threads; the returned traces are in column order.
pub fn elm_train(
    model: &ElmModel,
    x: &DenseMatrix,
    targets: &DenseMatrix,
    mu: f64,
    solver: &LassoSolver,
    cfg: &SolverConfig,
) -> Result<(ElmModel, Vec<SolverTrace>)> {
    let h = hidden_matrix(model, x)?;
    elm_train_on_hidden(model, h, targets, mu, solver, cfg)
}

/// [`elm_train`] with a precomputed hidden matrix.
pub fn elm_train_on_hidden(
    model: &ElmModel,
    h: DenseMatrix,
    targets: &DenseMatrix,
    mu: f64,
    solver: &LassoSolver,
    cfg: &SolverConfig,
) -> Result<(ElmModel, Vec<SolverTrace>)> {
    if targets.rows() != h.rows() {
        return Err(LinalgError::DimensionMismatch {
            op: "elm_train",
            left: format!("hidden[{}x{}]", h.rows(), h.cols()),
            right: format!("targets[{}x{}]", targets.rows(), targets.cols()),
        }
        .into());
    }
    if targets.cols() == 0 {
        return Err(Error::InvalidParameter("targets have no columns".into()));
    }
    let columns: Vec<Arc<LeastSquaresData>> = (0..targets.cols())
        .map(|c| LeastSquaresData::new(h.clone(), targets.column(c)).map(Arc::new))
        .collect::<Result<_>>()?;

    let results: Vec<Result<SolverTrace>> = std::thread::scope(|scope| {
        let handles: Vec<_> = columns
            .iter()
            .map(|data| scope.spawn(move || solve_lasso(data.clone(), mu, solver, cfg)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked"))
            .collect()
    });

    let n_hidden = model.arch.n_hidden;
    let n_out = targets.cols();
    let mut weights = vec![0.0; n_hidden * n_out];
    let mut traces = Vec::with_capacity(n_out);
    for (column, result) in results.into_iter().enumerate() {
        let trace = result.map_err(|e| Error::Column { column, source: Box::new(e) })?;
        for (j, w) in trace.final_point.iter().enumerate() {
            weights[j * n_out + column] = *w;
        }
        traces.push(trace);
    }
    let mut trained = model.clone();
    trained.output_weights = Some(DenseMatrix::new(n_hidden, n_out, weights)?);
    Ok((trained, traces))
}

/// `hidden_matrix(x) · output_weights`.
pub fn elm_predict(model: &ElmModel, x: &DenseMatrix) -> Result<DenseMatrix> {
    let beta = model.output_weights.as_ref().ok_or(Error::Untrained)?;
    Ok(hidden_matrix(model, x)?.matmul(beta)?)
}

pub fn one_hot(labels: &[usize], n_classes: usize) -> Result<DenseMatrix> {
    let mut data = vec![0.0; labels.len() * n_classes];
    for (i, &label) in labels.iter().enumerate() {
        if label >= n_classes {
            return Err(Error::LabelOutOfRange { label, n_classes });
        }
        data[i * n_classes + label] = 1.0;
    }
    Ok(DenseMatrix::new(labels.len(), n_classes, data)?)
}

/// Row-wise argmax; ties go to the lowest class index.
pub fn argmax_decode(scores: &DenseMatrix) -> Vec<usize> {
    (0..scores.rows())
        .map(|i| {
            let row = scores.row(i);
            let mut best = 0;
            for (c, &v) in row.iter().enumerate().skip(1) {
                if v > row[best] {
                    best = c;
                }
            }
            best
        })
        .collect()
}

impl ElmModel {
    pub fn to_text(&self) -> String {
        let arch = &self.arch;
        let n_outputs = self.output_weights.as_ref().map_or(0, |m| m.cols());
        let mut out = format!(
            "elm n_inputs={} n_hidden={} n_outputs={} activation={} seed={}\n",
            arch.n_inputs, arch.n_hidden, n_outputs, arch.activation, arch.seed
        );
        let mut push_rows = |m: &DenseMatrix| {
            for i in 0..m.rows() {
                let line: Vec<String> = m.row(i).iter().map(|v| v.to_string()).collect();
                out.push_str(&line.join(" "));
                out.push('\n');
            }
        };
        push_rows(&self.input_weights);
        push_rows(&DenseMatrix::new(1, arch.n_hidden, self.biases.as_slice().to_vec()).unwrap());
        if let Some(m) = &self.output_weights {
            push_rows(m);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::ModelFormat("empty file".into()))?;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("elm") {
            return Err(Error::ModelFormat("header must start with 'elm'".into()));
        }
        let (mut n_inputs, mut n_hidden, mut n_outputs, mut activation, mut seed) =
            (None, None, None, None, None);
        for field in fields {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::ModelFormat(format!("bad header field '{field}'")))?;
            let bad = |_| Error::ModelFormat(format!("bad value for {key}: '{value}'"));
            match key {
                "n_inputs" => n_inputs = Some(value.parse::<usize>().map_err(bad)?),
                "n_hidden" => n_hidden = Some(value.parse::<usize>().map_err(bad)?),
                "n_outputs" => n_outputs = Some(value.parse::<usize>().map_err(bad)?),
                "seed" => seed = Some(value.parse::<u64>().map_err(bad)?),
                "activation" => activation = Some(value.parse::<Activation>()?),
                _ => return Err(Error::ModelFormat(format!("unknown header field '{key}'"))),
            }
        }
        let missing = |k: &str| Error::ModelFormat(format!("header lacks {k}"));
        let arch = ElmArchitecture::new(
            n_inputs.ok_or_else(|| missing("n_inputs"))?,
            n_hidden.ok_or_else(|| missing("n_hidden"))?,
            activation.ok_or_else(|| missing("activation"))?,
            seed.ok_or_else(|| missing("seed"))?,
        )?;
        let n_outputs = n_outputs.ok_or_else(|| missing("n_outputs"))?;

        let values: Vec<f64> = lines
            .flat_map(str::split_whitespace)
            .map(|tok| {
                tok.parse::<f64>()
                    .map_err(|_| Error::ModelFormat(format!("not a number: '{tok}'")))
            })
            .collect::<Result<_>>()?;
        let h = arch.n_hidden;
        let expected = h * arch.n_inputs + h + h * n_outputs;
        if values.len() != expected {
            return Err(Error::ModelFormat(format!(
                "expected {expected} values, found {}",
                values.len()
            )));
        }
        let (w, rest) = values.split_at(h * arch.n_inputs);
        let (b, beta) = rest.split_at(h);
        Ok(ElmModel {
            arch,
            input_weights: DenseMatrix::new(h, arch.n_inputs, w.to_vec())?,
            biases: DenseVector::new(b.to_vec())?,
            output_weights: if n_outputs == 0 {
                None
            } else {
                Some(DenseMatrix::new(h, n_outputs, beta.to_vec())?)
            },
        })
    }
}
