use super::{check_divergence, SolverConfig, SolverTrace, TraceBuilder};
use crate::error::{Error, Result};
use crate::operators::SplitProblem;

/// Reductions of the trial step allowed per iteration.
pub const MAX_BACKTRACKS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TsengParams {
    /// Line-search ratio `ρ ∈ (0, 1)`.
    pub rho: f64,
    /// Step reduction factor `k ∈ (0, 1)`.
    pub shrink: f64,
    /// Trial step `γ₀ > 0`.
    pub gamma0: f64,
}

impl TsengParams {
    fn validate(&self) -> Result<()> {
        let ok = 0.0 < self.rho && self.rho < 1.0
            && 0.0 < self.shrink && self.shrink < 1.0
            && self.gamma0 > 0.0 && self.gamma0.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "Tseng needs rho, shrink in (0,1) and gamma0 > 0, got {self:?}"
            )))
        }
    }
}

/// Tseng's forward-backward-forward method with backtracking:
///
/// ```text
/// y_n     = J_γ^B(x_n − γ A x_n)
/// x_{n+1} = y_n − γ(A y_n − A x_n)
/// ```
///
/// where `γ = γ₀ kᵐ` for the smallest `m ≥ 0` with
/// `γ‖A y_n − A x_n‖ ≤ ρ‖y_n − x_n‖`. The residual is `‖y_n − x_n‖`; the
/// accepted steps are kept in `step_sizes`.
pub fn solve_tseng_fbf(
    problem: &SplitProblem,
    params: &TsengParams,
    cfg: &SolverConfig,
) -> Result<SolverTrace> {
    cfg.validate(problem.dimension())?;
    params.validate()?;

    let mut trace = TraceBuilder::start("tseng", cfg);
    let mut x = cfg.initial.clone();
    let mut converged = false;

    for n in 1..=cfg.max_iters {
        let ax = problem.eval_a(&x)?;
        let mut gamma = params.gamma0;
        let mut halvings = 0;
        let (y, ay) = loop {
            let y = problem.resolvent_b(&x.axpy(-gamma, &ax)?, gamma)?;
            let ay = problem.eval_a(&y)?;
            if gamma * ay.distance(&ax)? <= params.rho * y.distance(&x)? {
                break (y, ay);
            }
            halvings += 1;
            if halvings > MAX_BACKTRACKS {
                return Err(Error::StepSearchFailed {
                    iteration: n,
                    halvings: MAX_BACKTRACKS,
                });
            }
            gamma *= params.shrink;
        };

        let residual = y.distance(&x)?;
        let next = y.axpy(-gamma, &ay.sub(&ax)?)?;
        check_divergence(&next, n)?;
        trace.record(residual, next.distance(&x)?);
        trace.push_iterate(&next);
        trace.step_sizes.push(gamma);
        x = next;

        if residual <= cfg.residual_tol {
            converged = true;
            break;
        }
    }
    Ok(trace.finish(x, converged))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::linalg::DenseVector;
    use crate::operators::{CocoerciveFn, IdentityResolvent, L1Resolvent};

    fn scaled(c: f64, shift: f64) -> SplitProblem {
        let a = CocoerciveFn::new(1.0 / c, move |x: &DenseVector| Ok(x.map(|v| c * (v - shift))))
            .unwrap();
        SplitProblem::new(Arc::new(a), Arc::new(IdentityResolvent), 1)
    }

    #[test]
    fn solution_is_fixed() {
        let problem = scaled(2.0, 1.5);
        let params = TsengParams { rho: 0.5, shrink: 0.5, gamma0: 1.0 };
        let cfg = SolverConfig::new(DenseVector::new(vec![1.5]).unwrap()).with_max_iters(5);
        let trace = solve_tseng_fbf(&problem, &params, &cfg).unwrap();
        assert_eq!(trace.final_point[0], 1.5);
        assert!(trace.residuals.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn no_backtracking_for_small_steps() {
        // A = 0.1·(x − 1) is 0.1-Lipschitz; γ₀ = 1 gives γ‖Ay − Ax‖ = 0.1‖y − x‖ ≤ 0.5‖y − x‖
        let problem = scaled(0.1, 1.0);
        let params = TsengParams { rho: 0.5, shrink: 0.5, gamma0: 1.0 };
        let cfg = SolverConfig::zeros(1).with_max_iters(200);
        let trace = solve_tseng_fbf(&problem, &params, &cfg).unwrap();
        assert!(trace.step_sizes.iter().all(|&g| g == 1.0));
        assert!((trace.final_point[0] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn backtracks_for_large_trial_step() {
        let a = CocoerciveFn::new(0.25, |x: &DenseVector| Ok(x.scale(4.0))).unwrap();
        let problem = SplitProblem::new(Arc::new(a), Arc::new(L1Resolvent::new(0.1).unwrap()), 1);
        let params = TsengParams { rho: 0.5, shrink: 0.5, gamma0: 1.0 };
        let cfg = SolverConfig::new(DenseVector::new(vec![3.0]).unwrap()).with_max_iters(50);
        let trace = solve_tseng_fbf(&problem, &params, &cfg).unwrap();
        assert!(trace.step_sizes[0] <= 0.125, "{:?}", trace.step_sizes);
        assert!(trace.final_point[0].abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_parameters() {
        let problem = scaled(1.0, 0.0);
        let cfg = SolverConfig::zeros(1);
        for params in [
            TsengParams { rho: 1.0, shrink: 0.5, gamma0: 1.0 },
            TsengParams { rho: 0.5, shrink: 0.0, gamma0: 1.0 },
            TsengParams { rho: 0.5, shrink: 0.5, gamma0: -1.0 },
        ] {
            assert!(solve_tseng_fbf(&problem, &params, &cfg).is_err());
        }
    }
}
