use super::{check_divergence, SolverConfig, SolverTrace, TraceBuilder};
use crate::error::{Error, Result};
use crate::operators::{least_squares_gradient, soft_threshold, LeastSquaresData};

/// One momentum update: returns `(t_{n+1}, β_n)` with
/// `t_{n+1} = (1 + √(1 + 4t_n²))/2` and `β_n = (t_n − 1)/t_{n+1}`.
pub fn fista_momentum(t: f64) -> (f64, f64) {
    let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
    (t_next, (t - 1.0) / t_next)
}

/// FISTA on `½‖Hβ − T‖² + μ‖β‖₁` with step `1/L`, starting from `t₁ = 1`
/// and `x₀ = x₁ = cfg.initial`. The residual is `‖x_{n+1} − x_n‖`.
pub fn solve_fista(data: &LeastSquaresData, mu: f64, cfg: &SolverConfig) -> Result<SolverTrace> {
    cfg.validate(data.dimension())?;
    let lipschitz = data.lipschitz();
    if !(lipschitz > 0.0) {
        return Err(Error::InvalidParameter(
            "FISTA needs a positive Lipschitz constant".into(),
        ));
    }
    if !(mu >= 0.0) {
        return Err(Error::InvalidParameter(format!("mu must be nonnegative, got {mu}")));
    }
    let step = 1.0 / lipschitz;

    let mut trace = TraceBuilder::start("fista", cfg);
    let mut x_prev = cfg.initial.clone();
    let mut x = cfg.initial.clone();
    let mut t = 1.0;
    let mut converged = false;

    for n in 1..=cfg.max_iters {
        let (t_next, beta) = fista_momentum(t);
        let y = x.axpy(beta, &x.sub(&x_prev)?)?;
        let grad = least_squares_gradient(data, &y)?;
        let next = soft_threshold(&y.axpy(-step, &grad)?, step * mu)?;
        check_divergence(&next, n)?;

        let diff = next.distance(&x)?;
        trace.record(diff, diff);
        trace.push_iterate(&next);
        x_prev = std::mem::replace(&mut x, next);
        t = t_next;

        if diff <= cfg.residual_tol {
            converged = true;
            break;
        }
    }
    Ok(trace.finish(x, converged))
}
