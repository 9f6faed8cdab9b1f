use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::{
    forward_backward_map, solve_difb, solve_dong_mann, solve_fista, solve_iyiola_dr,
    solve_suantai_difbf, solve_tseng_fbf, suggest_params, DifbParams, DongMannParams,
    IyiolaDrParams, Sequence, SolverConfig, SolverTrace, SuantaiParams, TsengParams,
};
use crate::error::{Error, Result};
use crate::operators::{LeastSquaresData, SplitProblem};

/// The solvers available for `½‖Hβ − T‖² + μ‖β‖₁`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Difb,
    Fista,
    Tseng,
    Suantai,
    DongMann,
    IyiolaDr,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Difb,
        Algorithm::Fista,
        Algorithm::Tseng,
        Algorithm::Suantai,
        Algorithm::DongMann,
        Algorithm::IyiolaDr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Difb => "difb",
            Algorithm::Fista => "fista",
            Algorithm::Tseng => "tseng",
            Algorithm::Suantai => "suantai",
            Algorithm::DongMann => "dong_mann",
            Algorithm::IyiolaDr => "iyiola_dr",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown algorithm '{s}' (expected one of difb, fista, tseng, suantai, dong_mann, iyiola_dr)"
                ))
            })
    }
}

/// Settings for the double-inertial method. The step is given as a multiple
/// of the cocoercivity constant so one setting fits any data scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DifbSettings {
    /// `λ / α`, in `(0, 2)`.
    pub step_factor: f64,
    pub eps_lo: f64,
    pub eps_hi: f64,
    /// `(ϑ, δ)`; chosen by [`suggest_params`] when absent.
    pub inertia: Option<(f64, f64)>,
}

impl Default for DifbSettings {
    fn default() -> Self {
        Self {
            step_factor: 1.5,
            eps_lo: 0.9,
            eps_hi: 0.99,
            inertia: None,
        }
    }
}

impl DifbSettings {
    pub fn resolve(&self, alpha: f64) -> Result<DifbParams> {
        let lambda = self.step_factor * alpha;
        match self.inertia {
            Some((theta, delta)) => Ok(DifbParams::new(lambda, theta, delta, self.eps_lo, self.eps_hi)),
            None => suggest_params(alpha, lambda, self.eps_lo, self.eps_hi),
        }
    }
}

/// A solver together with its parameters. Step sizes tied to the data
/// (`1/L`) are filled in by [`solve_lasso`].
#[derive(Debug, Clone)]
pub enum LassoSolver {
    Difb(DifbSettings),
    Fista,
    /// `γ₀ = 1/L`.
    Tseng { rho: f64, shrink: f64 },
    /// `v₁ = 1/L`, `λ_n = 1/n²`.
    Suantai { rho: f64, alpha: f64, beta: f64 },
    /// Applied to the forward-backward map with step `1/L`; `α_n = β_n = 0`
    /// at `n = 1`.
    DongMann { alpha: f64, beta: f64, gamma: f64 },
    /// `ρ = 1/L`.
    IyiolaDr { alpha: f64, beta: f64 },
}

impl LassoSolver {
    /// Baseline defaults used by the experiments.
    pub fn defaults(algorithm: Algorithm) -> Self {
        match algorithm {
            Algorithm::Difb => LassoSolver::Difb(DifbSettings::default()),
            Algorithm::Fista => LassoSolver::Fista,
            Algorithm::Tseng => LassoSolver::Tseng { rho: 0.5, shrink: 0.5 },
            Algorithm::Suantai => LassoSolver::Suantai { rho: 0.5, alpha: 0.1, beta: 0.1 },
            Algorithm::DongMann => LassoSolver::DongMann { alpha: 0.1, beta: 0.1, gamma: 0.5 },
            Algorithm::IyiolaDr => LassoSolver::IyiolaDr { alpha: 0.2, beta: -0.05 },
        }
    }

    pub fn algorithm(&self) -> Algorithm {
        match self {
            LassoSolver::Difb(_) => Algorithm::Difb,
            LassoSolver::Fista => Algorithm::Fista,
            LassoSolver::Tseng { .. } => Algorithm::Tseng,
            LassoSolver::Suantai { .. } => Algorithm::Suantai,
            LassoSolver::DongMann { .. } => Algorithm::DongMann,
            LassoSolver::IyiolaDr { .. } => Algorithm::IyiolaDr,
        }
    }
}

/// Runs `solver` on `½‖Hβ − T‖² + μ‖β‖₁`.
pub fn solve_lasso(
    data: Arc<LeastSquaresData>,
    mu: f64,
    solver: &LassoSolver,
    cfg: &SolverConfig,
) -> Result<SolverTrace> {
    let lipschitz = data.lipschitz();
    let inv_l = || {
        if lipschitz > 0.0 {
            Ok(1.0 / lipschitz)
        } else {
            Err(Error::InvalidParameter("design matrix is zero".into()))
        }
    };
    match solver {
        LassoSolver::Fista => solve_fista(&data, mu, cfg),
        LassoSolver::IyiolaDr { alpha, beta } => {
            let params = IyiolaDrParams { alpha: *alpha, beta: *beta, rho: inv_l()? };
            solve_iyiola_dr(&data, mu, &params, cfg)
        }
        LassoSolver::Difb(settings) => {
            let problem = SplitProblem::lasso(data, mu)?;
            let params = settings.resolve(problem.alpha())?;
            solve_difb(&problem, &params, cfg)
        }
        LassoSolver::Tseng { rho, shrink } => {
            let gamma0 = inv_l()?;
            let problem = SplitProblem::lasso(data, mu)?;
            solve_tseng_fbf(&problem, &TsengParams { rho: *rho, shrink: *shrink, gamma0 }, cfg)
        }
        LassoSolver::Suantai { rho, alpha, beta } => {
            let params = SuantaiParams {
                rho: *rho,
                v1: inv_l()?,
                alpha_seq: Sequence::Constant(*alpha),
                beta_seq: Sequence::Constant(*beta),
                lambda_seq: Sequence::InverseSquare(1.0),
            };
            let problem = SplitProblem::lasso(data, mu)?;
            solve_suantai_difbf(&problem, &params, cfg)
        }
        LassoSolver::DongMann { alpha, beta, gamma } => {
            let step = inv_l()?;
            let problem = SplitProblem::lasso(data, mu)?;
            let params = DongMannParams {
                alpha_seq: Sequence::ZeroThen(*alpha),
                beta_seq: Sequence::ZeroThen(*beta),
                gamma_seq: Sequence::Constant(*gamma),
            };
            solve_dong_mann(|v| forward_backward_map(&problem, step, v), &params, cfg)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{DenseMatrix, DenseVector};

    #[test]
    fn names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
            assert_eq!(LassoSolver::defaults(a).algorithm(), a);
        }
        assert!("DIFB".parse::<Algorithm>().is_ok());
        assert!("newton".parse::<Algorithm>().is_err());
    }

    #[test]
    fn every_solver_handles_a_diagonal_lasso() {
        // ½‖diag(1,2)β − (3, −4)‖² + 0.5‖β‖₁ separates per coordinate:
        // β₁ = soft(3, 0.5) = 2.5, β₂ = soft(−8, 0.5)/4 = −1.875
        let h = DenseMatrix::diagonal(&[1.0, 2.0]).unwrap();
        let t = DenseVector::new(vec![3.0, -4.0]).unwrap();
        let data = Arc::new(LeastSquaresData::new(h, t).unwrap());
        for a in Algorithm::ALL {
            let cfg = SolverConfig::zeros(2).with_max_iters(5000);
            let trace = solve_lasso(data.clone(), 0.5, &LassoSolver::defaults(a), &cfg).unwrap();
            let p = &trace.final_point;
            assert!((p[0] - 2.5).abs() < 1e-8 && (p[1] + 1.875).abs() < 1e-8, "{a}: {p:?}");
        }
    }
}
