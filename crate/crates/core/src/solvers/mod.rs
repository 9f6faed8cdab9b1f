//! Iterative splitting solvers for `0 ∈ Az + Bz`.
//!
//! [`solve_difb`] is the double-inertial relaxed forward-backward method; the
//! remaining solvers are the baselines it is compared against. Every solver
//! returns a [`SolverTrace`] with one residual per iteration.

mod difb;
mod dong_mann;
mod fista;
mod iyiola_dr;
mod lasso;
mod lyapunov;
mod params;
mod sequence;
mod suantai;
mod tseng;

use std::time::Instant;

pub use difb::solve_difb;
pub use dong_mann::{solve_dong_mann, DongMannParams};
pub use fista::{fista_momentum, solve_fista};
pub use iyiola_dr::{solve_iyiola_dr, IyiolaDrParams};
pub use lasso::{solve_lasso, Algorithm, DifbSettings, LassoSolver};
pub use lyapunov::{lyapunov_series, LyapunovDiagnostics};
pub use params::{
    suggest_params, validate_assumption_b, AssumptionReport, Clause, ClauseCheck, ClauseStatus,
    DifbParams, InertialBounds,
};
pub use sequence::Sequence;
pub use suantai::{solve_suantai_difbf, SuantaiParams};
pub use tseng::{solve_tseng_fbf, TsengParams};

use crate::error::{Error, Result};
use crate::linalg::DenseVector;
use crate::operators::SplitProblem;

/// Iterates whose norm exceeds this are treated as divergent.
pub const DIVERGENCE_NORM: f64 = 1e12;

/// Run controls shared by all solvers.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub max_iters: usize,
    /// Stop once the per-iteration residual is at or below this value.
    pub residual_tol: f64,
    /// Seed for every initial point (`p₋₁ = p₀ = p₁` and the baselines' seeds).
    pub initial: DenseVector,
    /// Keep the full iterate history (needed for Lyapunov diagnostics).
    pub record_iterates: bool,
    /// Solution used for Lyapunov diagnostics; the final iterate when absent.
    pub reference_point: Option<DenseVector>,
}

impl SolverConfig {
    pub fn new(initial: DenseVector) -> Self {
        Self {
            max_iters: 1000,
            residual_tol: 0.0,
            initial,
            record_iterates: false,
            reference_point: None,
        }
    }

    pub fn zeros(dimension: usize) -> Self {
        Self::new(DenseVector::zeros(dimension))
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn with_residual_tol(mut self, tol: f64) -> Self {
        self.residual_tol = tol;
        self
    }

    pub fn with_record_iterates(mut self, record: bool) -> Self {
        self.record_iterates = record;
        self
    }

    pub fn with_reference_point(mut self, p_star: DenseVector) -> Self {
        self.reference_point = Some(p_star);
        self
    }

    fn validate(&self, dimension: usize) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter("max_iters must be at least 1".into()));
        }
        if !(self.residual_tol >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "residual_tol must be nonnegative, got {}",
                self.residual_tol
            )));
        }
        if self.initial.len() != dimension {
            return Err(Error::InvalidParameter(format!(
                "initial point has length {}, problem dimension is {dimension}",
                self.initial.len()
            )));
        }
        if !self.initial.is_finite() {
            return Err(Error::InvalidParameter("initial point is not finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// Residual fell to `residual_tol` (or an exact-stop test fired).
    Converged,
    MaxIterations,
}

#[derive(Debug, Clone)]
pub struct SolverTrace {
    pub algorithm: &'static str,
    pub final_point: DenseVector,
    /// Fixed-point residual per iteration; see each solver for its definition.
    pub residuals: Vec<f64>,
    /// `‖p_{k+1} − p_k‖` per iteration.
    pub step_diffs: Vec<f64>,
    /// Step size used per iteration, for solvers that adapt it.
    pub step_sizes: Vec<f64>,
    pub elapsed_seconds: f64,
    pub iterations_run: usize,
    pub converged: bool,
    pub stop: StopReason,
    /// Whether the parameters met the convergence conditions (`solve_difb` only).
    pub params_valid: Option<bool>,
    pub lyapunov: Option<LyapunovDiagnostics>,
    /// The governing sequence when `record_iterates` is set, starting from
    /// the initial point: `[p₋₁, p₀, p₁, …]` for `solve_difb`, `[x₀, x₁, …]`
    /// for the baselines (`γ_n` for Douglas–Rachford).
    pub iterates: Option<Vec<DenseVector>>,
}

/// Shared bookkeeping for a solver run.
struct TraceBuilder {
    algorithm: &'static str,
    started: Instant,
    residuals: Vec<f64>,
    step_diffs: Vec<f64>,
    step_sizes: Vec<f64>,
    iterates: Option<Vec<DenseVector>>,
}

impl TraceBuilder {
    /// Starts the clock; the iterate history, when requested, begins with
    /// the initial point.
    fn start(algorithm: &'static str, cfg: &SolverConfig) -> Self {
        Self {
            algorithm,
            started: Instant::now(),
            residuals: Vec::with_capacity(cfg.max_iters),
            step_diffs: Vec::with_capacity(cfg.max_iters),
            step_sizes: Vec::new(),
            iterates: cfg.record_iterates.then(|| vec![cfg.initial.clone()]),
        }
    }

    fn push_iterate(&mut self, p: &DenseVector) {
        if let Some(h) = self.iterates.as_mut() {
            h.push(p.clone());
        }
    }

    fn record(&mut self, residual: f64, step_diff: f64) {
        self.residuals.push(residual);
        self.step_diffs.push(step_diff);
    }

    fn finish(self, final_point: DenseVector, converged: bool) -> SolverTrace {
        let iterations_run = self.residuals.len();
        SolverTrace {
            algorithm: self.algorithm,
            final_point,
            residuals: self.residuals,
            step_diffs: self.step_diffs,
            step_sizes: self.step_sizes,
            elapsed_seconds: self.started.elapsed().as_secs_f64(),
            iterations_run,
            converged,
            stop: if converged {
                StopReason::Converged
            } else {
                StopReason::MaxIterations
            },
            params_valid: None,
            lyapunov: None,
            iterates: self.iterates,
        }
    }
}

fn check_divergence(p: &DenseVector, iteration: usize) -> Result<()> {
    if !p.is_finite() || p.norm2() > DIVERGENCE_NORM {
        Err(Error::Diverged { iteration })
    } else {
        Ok(())
    }
}

/// `p + a·(p − q) + b·(q − r)`, evaluated coordinate-wise so that equal
/// history points reproduce `p` bit for bit.
fn extrapolate(p: &DenseVector, q: &DenseVector, r: &DenseVector, a: f64, b: f64) -> DenseVector {
    DenseVector::from_vec_unchecked(
        p.iter()
            .zip(q.iter())
            .zip(r.iter())
            .map(|((&p, &q), &r)| p + a * (p - q) + b * (q - r))
            .collect(),
    )
}

/// `T w = J_λ^B(w − λ A w)`.
pub fn forward_backward_map(
    problem: &SplitProblem,
    lambda: f64,
    w: &DenseVector,
) -> Result<DenseVector> {
    let forward = w.axpy(-lambda, &problem.eval_a(w)?)?;
    problem.resolvent_b(&forward, lambda)
}
