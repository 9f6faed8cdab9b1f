//! The two halves of a monotone inclusion `0 ∈ Az + Bz`.
//!
//! `A` is single valued and cocoercive and is evaluated directly. `B` is only
//! ever touched through its resolvent `(I + λB)⁻¹`, with the step passed at
//! call time so adaptive-step solvers can share one operator object.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{
    matvec, matvec_transposed, spectral_norm_gram, Cholesky, DenseMatrix, DenseVector,
    LinalgError,
};

/// Power-iteration settings used to cache `‖HᵀH‖₂`.
pub const LIPSCHITZ_TOL: f64 = 1e-8;
pub const LIPSCHITZ_MAX_ITER: usize = 10_000;

/// A single-valued map `A` with `⟨Ap − Ay, p − y⟩ ≥ α‖Ap − Ay‖²`.
pub trait CocoerciveOperator: Send + Sync {
    fn eval(&self, p: &DenseVector) -> Result<DenseVector>;

    /// The cocoercivity constant `α`.
    fn alpha(&self) -> f64;
}

/// A maximal monotone `B`, available through `J_λ^B = (I + λB)⁻¹`.
pub trait ResolventOperator: Send + Sync {
    fn resolvent(&self, p: &DenseVector, step: f64) -> Result<DenseVector>;
}

type EvalFn = dyn Fn(&DenseVector) -> Result<DenseVector> + Send + Sync;
type ResolventFnBox = dyn Fn(&DenseVector, f64) -> Result<DenseVector> + Send + Sync;

/// Cocoercive map backed by a closure.
#[derive(Clone)]
pub struct CocoerciveFn {
    eval: Arc<EvalFn>,
    alpha: f64,
}

impl CocoerciveFn {
    pub fn new(
        alpha: f64,
        eval: impl Fn(&DenseVector) -> Result<DenseVector> + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "cocoercivity constant must be positive, got {alpha}"
            )));
        }
        Ok(Self {
            eval: Arc::new(eval),
            alpha,
        })
    }
}

impl CocoerciveOperator for CocoerciveFn {
    fn eval(&self, p: &DenseVector) -> Result<DenseVector> {
        (self.eval)(p)
    }

    fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl fmt::Debug for CocoerciveFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CocoerciveFn").field("alpha", &self.alpha).finish()
    }
}

/// Resolvent backed by a closure `(point, step) -> point`.
#[derive(Clone)]
pub struct ResolventFn {
    resolvent: Arc<ResolventFnBox>,
}

impl ResolventFn {
    pub fn new(
        resolvent: impl Fn(&DenseVector, f64) -> Result<DenseVector> + Send + Sync + 'static,
    ) -> Self {
        Self {
            resolvent: Arc::new(resolvent),
        }
    }
}

impl ResolventOperator for ResolventFn {
    fn resolvent(&self, p: &DenseVector, step: f64) -> Result<DenseVector> {
        (self.resolvent)(p, step)
    }
}

impl fmt::Debug for ResolventFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ResolventFn")
    }
}

/// `A = 0` on a space of the given dimension. Any `α > 0` is valid; `1` is
/// declared.
#[derive(Debug, Clone, Copy)]
pub struct ZeroOperator {
    pub dimension: usize,
}

pub fn zero_operator(dimension: usize) -> ZeroOperator {
    ZeroOperator { dimension }
}

impl CocoerciveOperator for ZeroOperator {
    fn eval(&self, p: &DenseVector) -> Result<DenseVector> {
        check_len(p, self.dimension, "zero operator")?;
        Ok(DenseVector::zeros(self.dimension))
    }

    fn alpha(&self) -> f64 {
        1.0
    }
}

/// `B = 0`, whose resolvent is the identity for every step.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityResolvent;

impl ResolventOperator for IdentityResolvent {
    fn resolvent(&self, p: &DenseVector, _step: f64) -> Result<DenseVector> {
        Ok(p.clone())
    }
}

/// `B = ∂(μ‖·‖₁)`; its resolvent with step `λ` is soft thresholding at `λμ`.
#[derive(Debug, Clone, Copy)]
pub struct L1Resolvent {
    mu: f64,
}

impl L1Resolvent {
    pub fn new(mu: f64) -> Result<Self> {
        if !(mu >= 0.0) || !mu.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "l1 weight must be finite and nonnegative, got {mu}"
            )));
        }
        Ok(Self { mu })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
}

impl ResolventOperator for L1Resolvent {
    fn resolvent(&self, p: &DenseVector, step: f64) -> Result<DenseVector> {
        if !(step >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "resolvent step must be nonnegative, got {step}"
            )));
        }
        soft_threshold(p, step * self.mu)
    }
}

/// Entry-wise `sign(xᵢ)·max(|xᵢ| − τ, 0)`.
pub fn soft_threshold(x: &DenseVector, tau: f64) -> Result<DenseVector> {
    if !(tau >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "soft threshold needs tau >= 0, got {tau}"
        )));
    }
    Ok(x.map(|v| {
        let shrunk = v.abs() - tau;
        if shrunk > 0.0 {
            shrunk.copysign(v)
        } else {
            0.0
        }
    }))
}

/// Least-squares data `½‖Hβ − T‖²` with its cached Lipschitz constant.
#[derive(Debug, Clone)]
pub struct LeastSquaresData {
    h: DenseMatrix,
    t: DenseVector,
    lipschitz: f64,
}

impl LeastSquaresData {
    /// Caches `‖HᵀH‖₂` by power iteration.
    pub fn new(h: DenseMatrix, t: DenseVector) -> Result<Self> {
        if h.rows() != t.len() {
            return Err(LinalgError::DimensionMismatch {
                op: "least squares data",
                left: format!("matrix[{}x{}]", h.rows(), h.cols()),
                right: format!("vector[{}]", t.len()),
            }
            .into());
        }
        let lipschitz = spectral_norm_gram(&h, LIPSCHITZ_TOL, LIPSCHITZ_MAX_ITER)?.value;
        Ok(Self { h, t, lipschitz })
    }

    pub fn h(&self) -> &DenseMatrix {
        &self.h
    }

    pub fn t(&self) -> &DenseVector {
        &self.t
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn dimension(&self) -> usize {
        self.h.cols()
    }

    /// `½‖Hβ − T‖²`.
    pub fn loss(&self, beta: &DenseVector) -> Result<f64> {
        let r = matvec(&self.h, beta)?.sub(&self.t)?;
        Ok(0.5 * r.dot(&r)?)
    }

    /// `½‖Hβ − T‖² + μ‖β‖₁`.
    pub fn lasso_objective(&self, beta: &DenseVector, mu: f64) -> Result<f64> {
        Ok(self.loss(beta)? + mu * beta.iter().map(|v| v.abs()).sum::<f64>())
    }
}

/// `Hᵀ(Hβ − T)`.
pub fn least_squares_gradient(data: &LeastSquaresData, beta: &DenseVector) -> Result<DenseVector> {
    let residual = matvec(&data.h, beta)?.sub(&data.t)?;
    Ok(matvec_transposed(&data.h, &residual)?)
}

/// `argmin_z ½‖Hz − T‖² + (1/2ρ)‖z − x‖²`, i.e. the solution of
/// `(I + ρHᵀH) z = x + ρHᵀT`.
pub fn least_squares_resolvent(
    data: &LeastSquaresData,
    x: &DenseVector,
    rho: f64,
) -> Result<DenseVector> {
    LeastSquaresResolvent::new(data, rho)?.apply(x)
}

/// [`least_squares_resolvent`] with the factorisation of `I + ρHᵀH` kept
/// between calls.
#[derive(Debug, Clone)]
pub struct LeastSquaresResolvent {
    factor: Cholesky,
    rho_htt: DenseVector,
}

impl LeastSquaresResolvent {
    pub fn new(data: &LeastSquaresData, rho: f64) -> Result<Self> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "resolvent parameter rho must be positive, got {rho}"
            )));
        }
        let system = data.h.gram().scale(rho).add_identity(1.0)?;
        let factor = Cholesky::factor(&system)?;
        let rho_htt = matvec_transposed(&data.h, &data.t)?.scale(rho);
        Ok(Self { factor, rho_htt })
    }

    pub fn apply(&self, x: &DenseVector) -> Result<DenseVector> {
        check_len(x, self.factor.dim(), "least squares resolvent")?;
        let rhs = x.add(&self.rho_htt)?;
        Ok(self.factor.solve(&rhs)?)
    }
}

/// The gradient of `½‖Hβ − T‖²` as a cocoercive operator with `α = 1/L`.
#[derive(Debug, Clone)]
pub struct LeastSquaresGradient {
    data: Arc<LeastSquaresData>,
}

impl LeastSquaresGradient {
    pub fn new(data: Arc<LeastSquaresData>) -> Self {
        Self { data }
    }

    pub fn data(&self) -> &LeastSquaresData {
        &self.data
    }
}

impl CocoerciveOperator for LeastSquaresGradient {
    fn eval(&self, p: &DenseVector) -> Result<DenseVector> {
        least_squares_gradient(&self.data, p)
    }

    fn alpha(&self) -> f64 {
        if self.data.lipschitz > 0.0 {
            1.0 / self.data.lipschitz
        } else {
            // H = 0: the gradient is constant, any α works
            1.0
        }
    }
}

/// An instance of `0 ∈ Az + Bz`.
#[derive(Clone)]
pub struct SplitProblem {
    a: Arc<dyn CocoerciveOperator>,
    b: Arc<dyn ResolventOperator>,
    dimension: usize,
}

impl SplitProblem {
    pub fn new(
        a: Arc<dyn CocoerciveOperator>,
        b: Arc<dyn ResolventOperator>,
        dimension: usize,
    ) -> Self {
        Self { a, b, dimension }
    }

    /// `A = ∇½‖Hβ − T‖²`, `B = ∂(μ‖·‖₁)`.
    pub fn lasso(data: Arc<LeastSquaresData>, mu: f64) -> Result<Self> {
        let dimension = data.dimension();
        Ok(Self::new(
            Arc::new(LeastSquaresGradient::new(data)),
            Arc::new(L1Resolvent::new(mu)?),
            dimension,
        ))
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn alpha(&self) -> f64 {
        self.a.alpha()
    }

    /// `A p`, checked to preserve the dimension.
    pub fn eval_a(&self, p: &DenseVector) -> Result<DenseVector> {
        check_len(p, self.dimension, "operator A input")?;
        let out = self.a.eval(p)?;
        check_len(&out, self.dimension, "operator A output")?;
        Ok(out)
    }

    /// `J_λ^B p`, checked to preserve the dimension.
    pub fn resolvent_b(&self, p: &DenseVector, step: f64) -> Result<DenseVector> {
        check_len(p, self.dimension, "resolvent input")?;
        let out = self.b.resolvent(p, step)?;
        check_len(&out, self.dimension, "resolvent output")?;
        Ok(out)
    }
}

impl fmt::Debug for SplitProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SplitProblem")
            .field("dimension", &self.dimension)
            .field("alpha", &self.a.alpha())
            .finish()
    }
}

fn check_len(p: &DenseVector, expected: usize, what: &'static str) -> Result<()> {
    if p.len() == expected {
        Ok(())
    } else {
        Err(LinalgError::DimensionMismatch {
            op: what,
            left: format!("space of dimension {expected}"),
            right: format!("vector[{}]", p.len()),
        }
        .into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(data: &[f64]) -> DenseVector {
        DenseVector::new(data.to_vec()).unwrap()
    }

    #[test]
    fn soft_threshold_examples() {
        assert_eq!(
            soft_threshold(&v(&[2.0, -0.5, 0.0]), 1.0).unwrap(),
            v(&[1.0, 0.0, 0.0])
        );
        let x = v(&[1.5, -2.25, 0.0, 7.0]);
        assert_eq!(soft_threshold(&x, 0.0).unwrap(), x);
        assert!(soft_threshold(&x, -1.0).is_err());
    }

    #[test]
    fn gradient_identity_case() {
        let data = LeastSquaresData::new(DenseMatrix::identity(2), v(&[0.0, 0.0])).unwrap();
        assert_eq!(
            least_squares_gradient(&data, &v(&[1.0, 2.0])).unwrap(),
            v(&[1.0, 2.0])
        );
        assert!(least_squares_gradient(&data, &v(&[1.0])).is_err());
    }

    #[test]
    fn resolvent_identity_design_closed_form() {
        let t = v(&[1.0, -3.0, 0.5]);
        let data = LeastSquaresData::new(DenseMatrix::identity(3), t.clone()).unwrap();
        let x = v(&[0.2, 0.4, -1.0]);
        let rho = 0.7;
        let got = least_squares_resolvent(&data, &x, rho).unwrap();
        for i in 0..3 {
            let expected = (x[i] + rho * t[i]) / (1.0 + rho);
            assert!((got[i] - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn resolvent_vanishing_step() {
        let h = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![0.5, -1.0], vec![3.0, 0.0]]).unwrap();
        let data = LeastSquaresData::new(h, v(&[1.0, 2.0, 3.0])).unwrap();
        let x = v(&[4.0, -2.0]);
        let out = least_squares_resolvent(&data, &x, 1e-10).unwrap();
        assert!(out.distance(&x).unwrap() <= 1e-6);
        assert!(least_squares_resolvent(&data, &x, 0.0).is_err());
    }

    #[test]
    fn zero_operator_examples() {
        let z = zero_operator(3);
        assert_eq!(z.eval(&v(&[1.0, 2.0, 3.0])).unwrap(), DenseVector::zeros(3));
        assert_eq!(z.alpha(), 1.0);
        assert!(z.eval(&v(&[1.0])).is_err());
    }

    #[test]
    fn lipschitz_is_cached_gram_norm() {
        let data =
            LeastSquaresData::new(DenseMatrix::diagonal(&[1.0, 2.0]).unwrap(), v(&[0.0, 0.0]))
                .unwrap();
        assert!((data.lipschitz() - 4.0).abs() < 1e-6);
        let op = LeastSquaresGradient::new(Arc::new(data));
        assert!((op.alpha() - 0.25).abs() < 1e-6);
    }

    #[test]
    fn split_problem_checks_dimensions() {
        let p = SplitProblem::new(Arc::new(zero_operator(2)), Arc::new(IdentityResolvent), 2);
        assert!(p.eval_a(&v(&[1.0, 2.0, 3.0])).is_err());
        assert!(p.resolvent_b(&v(&[1.0]), 1.0).is_err());
        let bad = SplitProblem::new(
            Arc::new(zero_operator(3)),
            Arc::new(IdentityResolvent),
            2,
        );
        assert!(bad.eval_a(&v(&[1.0, 2.0])).is_err());
    }

    #[test]
    fn l1_resolvent_scales_threshold_by_step() {
        let b = L1Resolvent::new(0.5).unwrap();
        assert_eq!(b.resolvent(&v(&[2.0, -2.0]), 2.0).unwrap(), v(&[1.0, -1.0]));
        assert!(L1Resolvent::new(-1.0).is_err());
    }
}
