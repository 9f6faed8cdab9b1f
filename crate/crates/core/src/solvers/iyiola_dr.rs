use super::{check_divergence, SolverConfig, SolverTrace, TraceBuilder};
use crate::error::{Error, Result};
use crate::operators::{soft_threshold, LeastSquaresData, LeastSquaresResolvent};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IyiolaDrParams {
    /// First inertial weight, `0 ≤ α < 1/3`.
    pub alpha: f64,
    /// Second inertial weight, `(3α − 1)/(3 + 4α) < β ≤ 0`.
    pub beta: f64,
    /// Resolvent parameter `ρ > 0`.
    pub rho: f64,
}

impl IyiolaDrParams {
    pub fn validate(&self) -> Result<()> {
        let a = self.alpha;
        if !(0.0..1.0 / 3.0).contains(&a) {
            return Err(Error::InvalidParameter(format!("alpha = {a} must lie in [0, 1/3)")));
        }
        let lower = (3.0 * a - 1.0) / (3.0 + 4.0 * a);
        if !(self.beta > lower && self.beta <= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "beta = {} must lie in ({lower}, 0]",
                self.beta
            )));
        }
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(Error::InvalidParameter(format!("rho = {} must be positive", self.rho)));
        }
        Ok(())
    }
}

/// Two-step inertial Douglas–Rachford splitting for
/// `½‖Hβ − T‖² + μ‖β‖₁`, with `J^A` the least-squares resolvent and `J^B`
/// soft thresholding at `ρμ`:
///
/// ```text
/// θ_{n+1} = J^A(2J^B − I)(γ_n) + (I − J^B)(γ_n)
/// γ_{n+1} = θ_{n+1} + α(θ_{n+1} − θ_n) + β(θ_n − θ_{n−1})
/// ```
///
/// with `γ₀ = θ₀ = θ₋₁ = cfg.initial`. The residual is `‖γ_{n+1} − γ_n‖`,
/// `step_diffs` holds `‖θ_{n+1} − θ_n‖` and the reported solution is the
/// shadow point `J^B(γ)`.
pub fn solve_iyiola_dr(
    data: &LeastSquaresData,
    mu: f64,
    params: &IyiolaDrParams,
    cfg: &SolverConfig,
) -> Result<SolverTrace> {
    cfg.validate(data.dimension())?;
    params.validate()?;
    if !(mu >= 0.0) {
        return Err(Error::InvalidParameter(format!("mu must be nonnegative, got {mu}")));
    }
    let resolvent_a = LeastSquaresResolvent::new(data, params.rho)?;
    let threshold = params.rho * mu;

    let mut trace = TraceBuilder::start("iyiola_dr", cfg);
    let mut gamma = cfg.initial.clone();
    let mut theta_prev = cfg.initial.clone();
    let mut theta = cfg.initial.clone();
    let mut converged = false;

    for n in 1..=cfg.max_iters {
        let jb = soft_threshold(&gamma, threshold)?;
        let reflected = jb.scale(2.0).sub(&gamma)?;
        let theta_next = resolvent_a.apply(&reflected)?.add(&gamma.sub(&jb)?)?;
        let gamma_next = super::extrapolate(&theta_next, &theta, &theta_prev, params.alpha, params.beta);
        check_divergence(&gamma_next, n)?;

        let residual = gamma_next.distance(&gamma)?;
        trace.record(residual, theta_next.distance(&theta)?);
        trace.push_iterate(&gamma_next);
        theta_prev = std::mem::replace(&mut theta, theta_next);
        gamma = gamma_next;

        if residual <= cfg.residual_tol {
            converged = true;
            break;
        }
    }
    let shadow = soft_threshold(&gamma, threshold)?;
    Ok(trace.finish(shadow, converged))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{DenseMatrix, DenseVector};

    #[test]
    fn parameter_ranges() {
        assert!(IyiolaDrParams { alpha: 0.2, beta: -0.05, rho: 1.0 }.validate().is_ok());
        assert!(IyiolaDrParams { alpha: 0.0, beta: 0.0, rho: 1.0 }.validate().is_ok());
        assert!(IyiolaDrParams { alpha: 1.0 / 3.0, beta: 0.0, rho: 1.0 }.validate().is_err());
        // (3·0.2 − 1)/(3 + 0.8) ≈ −0.105
        assert!(IyiolaDrParams { alpha: 0.2, beta: -0.11, rho: 1.0 }.validate().is_err());
        assert!(IyiolaDrParams { alpha: 0.2, beta: 0.01, rho: 1.0 }.validate().is_err());
        assert!(IyiolaDrParams { alpha: 0.2, beta: 0.0, rho: 0.0 }.validate().is_err());
    }

    #[test]
    fn identity_design_without_penalty() {
        let t = DenseVector::new(vec![2.0, -1.0]).unwrap();
        let data = LeastSquaresData::new(DenseMatrix::identity(2), t.clone()).unwrap();
        let params = IyiolaDrParams { alpha: 0.2, beta: -0.05, rho: 1.0 };
        let cfg = SolverConfig::zeros(2).with_max_iters(500);
        let trace = solve_iyiola_dr(&data, 0.0, &params, &cfg).unwrap();
        assert!(trace.final_point.distance(&t).unwrap() < 1e-10);
    }
}
