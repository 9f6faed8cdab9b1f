//! Parameters of the double-inertial method and their feasibility region.
//!
//! With `κ = 2α/(4α − λ)` (the averagedness constant of `J_λ^B(I − λA)`) and
//! `E₁` the lower relaxation bound, the inertial weights must satisfy
//!
//! * `0 ≤ ϑ < min{1/3, E₁(1−κ) / (E₁(1−κ) + 2κ)}`
//! * `δ ≤ 0` and `δ > max{−(E₁(1−κ)(1−ϑ) − 2κϑ)/(E₁(1−κ)),
//!   (ϑ(1+ϑ) − E₁q(1−ϑ)²) / ((1+ϑ)(1 + E₁q))}` with `q = (1−κ)/κ`
//! * `κϑ(1+ϑ) − E₁(1−ϑ)²(1−κ) < κδ(1+2ϑ−δ) + 2E₁(1−κ)(1+ϑ)δ + E₁(1−κ)δ²`
//!
//! Each condition is reported separately by [`validate_assumption_b`].

use std::fmt;

use super::Sequence;
use crate::error::{Error, Result};

/// Number of schedule terms inspected when the relaxation schedule is not a
/// constant.
pub const SCHEDULE_CHECK_HORIZON: usize = 10_000;

#[derive(Debug, Clone)]
pub struct DifbParams {
    /// Resolvent step `λ ∈ (0, 2α)`.
    pub lambda: f64,
    /// First inertial weight `ϑ ∈ [0, 1)`.
    pub theta: f64,
    /// Second inertial weight `δ ≤ 0`.
    pub delta: f64,
    /// Lower relaxation bound `E₁`.
    pub eps_lo: f64,
    /// Upper relaxation bound `E₂`.
    pub eps_hi: f64,
    /// Relaxation weights `Ɛ_k`.
    pub eps_schedule: Sequence,
}

impl DifbParams {
    /// Parameters with the constant relaxation `Ɛ_k = (E₁ + E₂)/2`.
    pub fn new(lambda: f64, theta: f64, delta: f64, eps_lo: f64, eps_hi: f64) -> Self {
        Self {
            lambda,
            theta,
            delta,
            eps_lo,
            eps_hi,
            eps_schedule: Sequence::Constant(0.5 * (eps_lo + eps_hi)),
        }
    }

    pub fn with_schedule(mut self, schedule: Sequence) -> Self {
        self.eps_schedule = schedule;
        self
    }

    /// `κ = 2α/(4α − λ)`.
    pub fn kappa(&self, alpha: f64) -> f64 {
        kappa(alpha, self.lambda)
    }
}

pub(crate) fn kappa(alpha: f64, lambda: f64) -> f64 {
    2.0 * alpha / (4.0 * alpha - lambda)
}

/// The bounds on `ϑ` and `δ` implied by `κ` and `E₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InertialBounds {
    pub kappa: f64,
    pub eps_lo: f64,
}

impl InertialBounds {
    pub fn new(alpha: f64, lambda: f64, eps_lo: f64) -> Self {
        Self {
            kappa: kappa(alpha, lambda),
            eps_lo,
        }
    }

    /// Strict upper bound on `ϑ`.
    pub fn theta_upper(&self) -> f64 {
        let e = self.eps_lo * (1.0 - self.kappa);
        (1.0 / 3.0_f64).min(e / (e + 2.0 * self.kappa))
    }

    /// The two strict lower bounds on `δ`.
    pub fn delta_lower(&self, theta: f64) -> (f64, f64) {
        let k = self.kappa;
        let e = self.eps_lo * (1.0 - k);
        let eq = self.eps_lo * (1.0 - k) / k;
        let first = -(e * (1.0 - theta) - 2.0 * k * theta) / e;
        let second =
            (theta * (1.0 + theta) - eq * (1.0 - theta).powi(2)) / ((1.0 + theta) * (1.0 + eq));
        (first, second)
    }

    /// `RHS − LHS` of the quadratic condition; feasible when positive.
    pub fn quadratic_margin(&self, theta: f64, delta: f64) -> f64 {
        let k = self.kappa;
        let e = self.eps_lo * (1.0 - k);
        let lhs = k * theta * (1.0 + theta) - e * (1.0 - theta).powi(2);
        let rhs = k * delta * (1.0 + 2.0 * theta - delta)
            + 2.0 * e * (1.0 + theta) * delta
            + e * delta * delta;
        rhs - lhs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clause {
    /// `λ ∈ (0, 2α)`.
    StepSize,
    /// `0 < E₁ < E₂ < 1` and `Ɛ_k ∈ [E₁, E₂]`.
    Relaxation,
    /// Upper bound on `ϑ`.
    Theta,
    /// `δ ≤ 0` and above both lower bounds.
    DeltaLowerBound,
    /// The quadratic inequality coupling `ϑ` and `δ`.
    DeltaQuadratic,
}

impl Clause {
    pub fn label(&self) -> &'static str {
        match self {
            Clause::StepSize => "step",
            Clause::Relaxation => "(i)",
            Clause::Theta => "(ii)",
            Clause::DeltaLowerBound => "(iii-a)",
            Clause::DeltaQuadratic => "(iii-b)",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClauseStatus {
    Satisfied,
    Violated,
    /// Not evaluated because it depends on a clause that failed.
    Skipped,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClauseCheck {
    pub clause: Clause,
    pub status: ClauseStatus,
    /// The computed bound the clause compares against, when there is one.
    pub bound: Option<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssumptionReport {
    pub alpha: f64,
    pub kappa: Option<f64>,
    pub checks: Vec<ClauseCheck>,
}

impl AssumptionReport {
    pub fn is_ok(&self) -> bool {
        self.checks
            .iter()
            .all(|c| c.status == ClauseStatus::Satisfied)
    }

    pub fn violations(&self) -> impl Iterator<Item = &ClauseCheck> {
        self.checks
            .iter()
            .filter(|c| c.status != ClauseStatus::Satisfied)
    }

    pub fn check(&self, clause: Clause) -> Option<&ClauseCheck> {
        self.checks.iter().find(|c| c.clause == clause)
    }
}

impl fmt::Display for AssumptionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kappa {
            Some(k) => writeln!(f, "alpha = {}, kappa = {k}", self.alpha)?,
            None => writeln!(f, "alpha = {}, kappa = n/a", self.alpha)?,
        }
        for c in &self.checks {
            let status = match c.status {
                ClauseStatus::Satisfied => "ok",
                ClauseStatus::Violated => "VIOLATED",
                ClauseStatus::Skipped => "skipped",
            };
            write!(f, "{:<8} {:<9} {}", c.clause.label(), status, c.detail)?;
            if let Some(b) = c.bound {
                write!(f, " [bound = {b}]")?;
            }
            writeln!(f)?;
        }
        write!(f, "{}", if self.is_ok() { "feasible" } else { "infeasible" })
    }
}

fn status(ok: bool) -> ClauseStatus {
    if ok {
        ClauseStatus::Satisfied
    } else {
        ClauseStatus::Violated
    }
}

fn skipped(clause: Clause, why: &str) -> ClauseCheck {
    ClauseCheck {
        clause,
        status: ClauseStatus::Skipped,
        bound: None,
        detail: why.to_string(),
    }
}

/// Checks the step-size precondition and every convergence-condition clause.
pub fn validate_assumption_b(alpha: f64, p: &DifbParams) -> AssumptionReport {
    let mut checks = Vec::with_capacity(5);

    let step_ok = alpha > 0.0 && p.lambda > 0.0 && p.lambda < 2.0 * alpha;
    checks.push(ClauseCheck {
        clause: Clause::StepSize,
        status: status(step_ok),
        bound: Some(2.0 * alpha),
        detail: format!("lambda = {} must lie in (0, 2*alpha)", p.lambda),
    });

    let bounds_ok = 0.0 < p.eps_lo && p.eps_lo < p.eps_hi && p.eps_hi < 1.0;
    let outside = p
        .eps_schedule
        .first_violation(SCHEDULE_CHECK_HORIZON, |e| p.eps_lo <= e && e <= p.eps_hi);
    let relax_ok = bounds_ok && outside.is_none();
    let relax_detail = match (bounds_ok, outside) {
        (false, _) => format!(
            "need 0 < eps_lo < eps_hi < 1, got eps_lo = {}, eps_hi = {}",
            p.eps_lo, p.eps_hi
        ),
        (true, Some(k)) => format!(
            "relaxation at k = {k} is {} outside [{}, {}]",
            p.eps_schedule.at(k),
            p.eps_lo,
            p.eps_hi
        ),
        (true, None) => format!("schedule inside [{}, {}]", p.eps_lo, p.eps_hi),
    };
    checks.push(ClauseCheck {
        clause: Clause::Relaxation,
        status: status(relax_ok),
        bound: None,
        detail: relax_detail,
    });

    if !step_ok || !bounds_ok {
        let why = "requires a valid step size and relaxation bounds";
        checks.push(skipped(Clause::Theta, why));
        checks.push(skipped(Clause::DeltaLowerBound, why));
        checks.push(skipped(Clause::DeltaQuadratic, why));
        return AssumptionReport {
            alpha,
            kappa: None,
            checks,
        };
    }

    let b = InertialBounds::new(alpha, p.lambda, p.eps_lo);
    let theta_bound = b.theta_upper();
    checks.push(ClauseCheck {
        clause: Clause::Theta,
        status: status(0.0 <= p.theta && p.theta < theta_bound),
        bound: Some(theta_bound),
        detail: format!("theta = {} must satisfy 0 <= theta < bound", p.theta),
    });

    let (lb1, lb2) = b.delta_lower(p.theta);
    let lower = lb1.max(lb2);
    checks.push(ClauseCheck {
        clause: Clause::DeltaLowerBound,
        status: status(p.delta <= 0.0 && p.delta > lower),
        bound: Some(lower),
        detail: format!(
            "delta = {} must satisfy bound < delta <= 0 (lower bounds {lb1}, {lb2})",
            p.delta
        ),
    });

    let margin = b.quadratic_margin(p.theta, p.delta);
    checks.push(ClauseCheck {
        clause: Clause::DeltaQuadratic,
        status: status(margin > 0.0),
        bound: None,
        detail: format!("quadratic coupling margin = {margin:e} must be positive"),
    });

    AssumptionReport {
        alpha,
        kappa: Some(b.kappa),
        checks,
    }
}

/// Picks feasible inertial weights for the given step and relaxation bounds.
///
/// Starts from `ϑ = 0.9·bound` and `δ` halfway to the tighter lower bound,
/// then halves `|δ|` (up to 60 times) and afterwards `ϑ` until every clause
/// holds. `(ϑ, δ) = (0, 0)` is always feasible, so failure means the inputs
/// themselves are invalid.
pub fn suggest_params(alpha: f64, lambda: f64, eps_lo: f64, eps_hi: f64) -> Result<DifbParams> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    if !(lambda > 0.0 && lambda < 2.0 * alpha) {
        return Err(Error::InvalidParameter(format!(
            "lambda = {lambda} must lie in (0, {})",
            2.0 * alpha
        )));
    }
    if !(0.0 < eps_lo && eps_lo < eps_hi && eps_hi < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < eps_lo < eps_hi < 1, got {eps_lo}, {eps_hi}"
        )));
    }

    let bounds = InertialBounds::new(alpha, lambda, eps_lo);
    let mut theta = 0.9 * bounds.theta_upper();
    for _ in 0..=60 {
        let (lb1, lb2) = bounds.delta_lower(theta);
        let lower = lb1.max(lb2);
        if lower < 0.0 {
            let mut delta = 0.5 * lower;
            for _ in 0..=60 {
                let candidate = DifbParams::new(lambda, theta, delta, eps_lo, eps_hi);
                if validate_assumption_b(alpha, &candidate).is_ok() {
                    return Ok(candidate);
                }
                delta *= 0.5;
            }
        }
        theta *= 0.5;
    }

    let fallback = DifbParams::new(lambda, 0.0, 0.0, eps_lo, eps_hi);
    let report = validate_assumption_b(alpha, &fallback);
    if report.is_ok() {
        Ok(fallback)
    } else {
        Err(Error::Infeasible(report.to_string()))
    }
}
