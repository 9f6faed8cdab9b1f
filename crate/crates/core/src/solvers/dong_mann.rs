use super::{check_divergence, Sequence, SolverConfig, SolverTrace, TraceBuilder};
use crate::error::{Error, Result};
use crate::linalg::DenseVector;

#[derive(Debug, Clone)]
pub struct DongMannParams {
    /// Nondecreasing in `[0, α̂]`, `α̂ < 1`, with `α₁ = 0`.
    pub alpha_seq: Sequence,
    /// Nondecreasing in `[0, β̂]`, `β̂ < 1`, with `β₁ = 0`.
    pub beta_seq: Sequence,
    /// Relaxation `γ_n ∈ (0, 1)`.
    pub gamma_seq: Sequence,
}

impl DongMannParams {
    fn validate(&self, horizon: usize) -> Result<()> {
        for (name, seq) in [("alpha", &self.alpha_seq), ("beta", &self.beta_seq)] {
            if seq.at(1) != 0.0 {
                return Err(Error::InvalidParameter(format!("{name}_1 must be 0")));
            }
            if let Some(n) = seq.first_violation(horizon, |a| (0.0..1.0).contains(&a)) {
                return Err(Error::InvalidParameter(format!("{name}_{n} is outside [0, 1)")));
            }
            if !seq.is_nondecreasing(horizon) {
                return Err(Error::InvalidParameter(format!("{name} must be nondecreasing")));
            }
        }
        if let Some(n) = self.gamma_seq.first_violation(horizon, |g| 0.0 < g && g < 1.0) {
            return Err(Error::InvalidParameter(format!("gamma_{n} is outside (0, 1)")));
        }
        Ok(())
    }
}

/// Double-inertial Mann iteration for a nonexpansive `T`:
///
/// ```text
/// z_n     = v_n + α_n(v_n − v_{n−1})
/// y_n     = v_n + β_n(v_n − v_{n−1})
/// v_{n+1} = (1 − γ_n) z_n + γ_n T(y_n)
/// ```
///
/// with `v₀ = v₁ = cfg.initial`. The residual is `‖v_n − T v_n‖`.
pub fn solve_dong_mann<F>(
    t_map: F,
    params: &DongMannParams,
    cfg: &SolverConfig,
) -> Result<SolverTrace>
where
    F: Fn(&DenseVector) -> Result<DenseVector>,
{
    cfg.validate(cfg.initial.len())?;
    params.validate(cfg.max_iters)?;

    let mut trace = TraceBuilder::start("dong_mann", cfg);
    let mut v_prev = cfg.initial.clone();
    let mut v = cfg.initial.clone();
    let mut converged = false;

    for n in 1..=cfg.max_iters {
        let momentum = v.sub(&v_prev)?;
        let z = v.axpy(params.alpha_seq.at(n), &momentum)?;
        let y = v.axpy(params.beta_seq.at(n), &momentum)?;
        let ty = t_map(&y)?;
        let tv = if y == v { ty.clone() } else { t_map(&v)? };
        let residual = v.distance(&tv)?;
        // z + γ(Ty − z) keeps exact fixed points exact
        let next = z.axpy(params.gamma_seq.at(n), &ty.sub(&z)?)?;
        check_divergence(&next, n)?;

        trace.record(residual, next.distance(&v)?);
        trace.push_iterate(&next);
        v_prev = std::mem::replace(&mut v, next);

        if residual <= cfg.residual_tol {
            converged = true;
            break;
        }
    }
    Ok(trace.finish(v, converged))
}
