use super::{check_divergence, Sequence, SolverConfig, SolverTrace, TraceBuilder};
use crate::error::{Error, Result};
use crate::linalg::DenseVector;
use crate::operators::SplitProblem;

#[derive(Debug, Clone)]
pub struct SuantaiParams {
    /// Step ratio `ρ ∈ (0, 1)`.
    pub rho: f64,
    /// Initial step `v₁ > 0`.
    pub v1: f64,
    /// First inertial weights `α_n`.
    pub alpha_seq: Sequence,
    /// Second inertial weights `β_n`.
    pub beta_seq: Sequence,
    /// Summable step increments `λ_n ≥ 0`.
    pub lambda_seq: Sequence,
}

/// Stop test for `s_n = r_n`.
fn coincide(s: &DenseVector, r: &DenseVector) -> Result<bool> {
    Ok(s.distance(r)? <= 1e-15 * (1.0 + r.norm2()))
}

/// Double-inertial forward-backward-forward method with adaptive step:
///
/// ```text
/// p_n     = θ_n + α_n(θ_n − θ_{n−1})
/// r_n     = p_n + β_n(p_n − p_{n−1})
/// s_n     = J_{v_n}^B(r_n − v_n A r_n)          (stop if s_n = r_n)
/// θ_{n+1} = s_n − v_n(A s_n − A r_n)
/// v_{n+1} = min{ρ‖r_n − s_n‖/‖A r_n − A s_n‖, v_n + λ_n}   (v_n + λ_n if A r_n = A s_n)
/// ```
///
/// with `θ₀ = θ₁ = cfg.initial` and `p₀ = p₁`. The residual is `‖s_n − r_n‖`.
pub fn solve_suantai_difbf(
    problem: &SplitProblem,
    params: &SuantaiParams,
    cfg: &SolverConfig,
) -> Result<SolverTrace> {
    cfg.validate(problem.dimension())?;
    if !(0.0 < params.rho && params.rho < 1.0 && params.v1 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need rho in (0,1) and v1 > 0, got rho = {}, v1 = {}",
            params.rho, params.v1
        )));
    }
    let horizon = cfg.max_iters;
    if let Some(n) = params.lambda_seq.first_violation(horizon, |l| l >= 0.0) {
        return Err(Error::InvalidParameter(format!("lambda_{n} is negative")));
    }
    for (name, seq) in [("alpha", &params.alpha_seq), ("beta", &params.beta_seq)] {
        if let Some(n) = seq.first_violation(horizon, |a| a >= 0.0) {
            return Err(Error::InvalidParameter(format!("{name}_{n} is negative")));
        }
    }

    let mut trace = TraceBuilder::start("suantai", cfg);
    let mut theta_prev = cfg.initial.clone();
    let mut theta = cfg.initial.clone();
    let mut p_prev: Option<DenseVector> = None;
    let mut v = params.v1;
    let mut converged = false;

    for n in 1..=cfg.max_iters {
        let p = theta.axpy(params.alpha_seq.at(n), &theta.sub(&theta_prev)?)?;
        let r = match &p_prev {
            Some(pp) => p.axpy(params.beta_seq.at(n), &p.sub(pp)?)?,
            None => p.clone(),
        };
        let ar = problem.eval_a(&r)?;
        let s = problem.resolvent_b(&r.axpy(-v, &ar)?, v)?;
        let residual = s.distance(&r)?;
        trace.step_sizes.push(v);

        if coincide(&s, &r)? {
            trace.record(residual, s.distance(&theta)?);
            trace.push_iterate(&s);
            theta = s;
            converged = true;
            break;
        }

        let as_ = problem.eval_a(&s)?;
        let a_gap = ar.distance(&as_)?;
        let next = s.axpy(-v, &as_.sub(&ar)?)?;
        check_divergence(&next, n)?;
        trace.record(residual, next.distance(&theta)?);
        trace.push_iterate(&next);

        let grown = v + params.lambda_seq.at(n);
        v = if a_gap != 0.0 {
            (params.rho * residual / a_gap).min(grown)
        } else {
            grown
        };

        theta_prev = std::mem::replace(&mut theta, next);
        p_prev = Some(p);

        if residual <= cfg.residual_tol {
            converged = true;
            break;
        }
    }
    Ok(trace.finish(theta, converged))
}
