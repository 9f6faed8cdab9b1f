use super::{
    check_divergence, extrapolate, forward_backward_map, lyapunov_series, validate_assumption_b,
    DifbParams, SolverConfig, SolverTrace, TraceBuilder,
};
use crate::error::Result;
use crate::operators::SplitProblem;

/// Double-inertial relaxed forward-backward iteration:
///
/// ```text
/// w_k     = p_k + ϑ(p_k − p_{k−1}) + δ(p_{k−1} − p_{k−2})
/// p_{k+1} = (1 − Ɛ_k) w_k + Ɛ_k J_λ^B(w_k − λ A w_k)
/// ```
///
/// starting from `p₋₁ = p₀ = p₁ = cfg.initial`. The residual is
/// `‖w_k − T w_k‖`. Parameters failing the convergence conditions are still run;
/// the outcome is recorded in `params_valid`.
pub fn solve_difb(
    problem: &SplitProblem,
    params: &DifbParams,
    cfg: &SolverConfig,
) -> Result<SolverTrace> {
    cfg.validate(problem.dimension())?;
    let alpha = problem.alpha();
    let params_valid = validate_assumption_b(alpha, params).is_ok();

    let mut trace = TraceBuilder::start("difb", cfg);
    let mut history = cfg
        .record_iterates
        .then(|| vec![cfg.initial.clone(); 3]);

    let mut p_km2 = cfg.initial.clone();
    let mut p_km1 = cfg.initial.clone();
    let mut p_k = cfg.initial.clone();
    let mut converged = false;

    for k in 1..=cfg.max_iters {
        let w = extrapolate(&p_k, &p_km1, &p_km2, params.theta, params.delta);
        let tw = forward_backward_map(problem, params.lambda, &w)?;
        let gap = tw.sub(&w)?;
        let residual = gap.norm2();
        // w + Ɛ(Tw − w) keeps exact fixed points exact
        let next = w.axpy(params.eps_schedule.at(k), &gap)?;
        check_divergence(&next, k)?;

        trace.record(residual, next.distance(&p_k)?);
        if let Some(h) = history.as_mut() {
            h.push(next.clone());
        }
        p_km2 = std::mem::replace(&mut p_km1, std::mem::replace(&mut p_k, next));

        if residual <= cfg.residual_tol {
            converged = true;
            break;
        }
    }

    let mut out = trace.finish(p_k, converged);
    out.params_valid = Some(params_valid);
    if let Some(h) = history {
        let p_star = cfg.reference_point.as_ref().unwrap_or(&out.final_point);
        out.lyapunov = Some(lyapunov_series(&h, p_star, alpha, params)?);
        out.iterates = Some(h);
    }
    Ok(out)
}
