use super::params::kappa;
use super::DifbParams;
use crate::error::{Error, Result};
use crate::linalg::DenseVector;

/// Energy sequences certifying convergence of the double-inertial method.
///
/// With `q = E₁(1−κ)/κ`:
///
/// ```text
/// Γ_k = ‖p_k − p*‖² − ϑ‖p_{k−1} − p*‖² − δ‖p_{k−2} − p*‖² + q(1 − |δ| − ϑ)‖p_k − p_{k−1}‖²
/// Γ̄_k = Γ_k + c₁‖p_{k−1} − p_{k−2}‖²
/// ```
///
/// Under feasible parameters `c₁, c₂ > 0`, `Γ_k ≥ 0` and
/// `Γ̄_{k+1} ≤ Γ̄_k − c₂‖p_{k−1} − p_{k−2}‖²`.
#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovDiagnostics {
    pub kappa: f64,
    pub c1: f64,
    pub c2: f64,
    /// `Γ_k` for `k = 1, 2, …`.
    pub gamma_series: Vec<f64>,
    /// `Γ̄_k` for `k = 1, 2, …`.
    pub gamma_bar_series: Vec<f64>,
}

impl LyapunovDiagnostics {
    /// Largest increase `Γ̄_{k+1} − Γ̄_k` over the run (negative when strictly
    /// decreasing).
    pub fn max_increase(&self) -> f64 {
        self.gamma_bar_series
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_gamma(&self) -> f64 {
        self.gamma_series.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `Γ̄` non-increasing up to `slack·(1 + |Γ̄₁|)`.
    pub fn is_descending(&self, slack: f64) -> bool {
        let Some(first) = self.gamma_bar_series.first() else {
            return true;
        };
        let allowance = slack * (1.0 + first.abs());
        self.gamma_bar_series
            .windows(2)
            .all(|w| w[1] <= w[0] + allowance)
    }
}

/// Evaluates `Γ_k`, `Γ̄_k`, `c₁`, `c₂` on an iterate history
/// `[p₋₁, p₀, p₁, …]` against the reference solution `p_star`.
pub fn lyapunov_series(
    history: &[DenseVector],
    p_star: &DenseVector,
    alpha: f64,
    params: &DifbParams,
) -> Result<LyapunovDiagnostics> {
    if history.len() < 3 {
        return Err(Error::HistoryTooShort {
            got: history.len(),
            needed: 3,
        });
    }
    let theta = params.theta;
    let delta = params.delta;
    let abs_delta = delta.abs();
    let kappa = kappa(alpha, params.lambda);
    let q = params.eps_lo * (1.0 - kappa) / kappa;

    let lead = (1.0 + theta) * (theta - delta)
        - q * (theta * theta - 2.0 * theta - abs_delta * theta - abs_delta + 1.0);
    let c1 = -lead;
    let c2 = -(lead - delta * (theta - delta) - q * (delta * delta - abs_delta - abs_delta * theta));
    let step_weight = q * (1.0 - abs_delta - theta);

    let dist2: Vec<f64> = history
        .iter()
        .map(|p| p.distance(p_star).map(|d| d * d))
        .collect::<std::result::Result<_, _>>()?;
    let step2: Vec<f64> = history
        .windows(2)
        .map(|w| w[1].distance(&w[0]).map(|d| d * d))
        .collect::<std::result::Result<_, _>>()?;

    let mut gamma_series = Vec::with_capacity(history.len() - 2);
    let mut gamma_bar_series = Vec::with_capacity(history.len() - 2);
    // history[j] = p_{j−1}, so Γ_k uses j = k + 1
    for j in 2..history.len() {
        let gamma = dist2[j] - theta * dist2[j - 1] - delta * dist2[j - 2]
            + step_weight * step2[j - 1];
        gamma_series.push(gamma);
        gamma_bar_series.push(gamma + c1 * step2[j - 2]);
    }

    Ok(LyapunovDiagnostics {
        kappa,
        c1,
        c2,
        gamma_series,
        gamma_bar_series,
    })
}
