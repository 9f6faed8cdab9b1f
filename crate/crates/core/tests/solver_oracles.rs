mod common;

use common::{data_of, vector};
use difb_core::linalg::{matvec_transposed, solve_spd, DenseVector};
use difb_core::operators::SplitProblem;
use difb_core::solvers::{
    forward_backward_map, solve_difb, solve_dong_mann, solve_iyiola_dr, solve_lasso,
    suggest_params, Algorithm, DifbParams, DongMannParams, IyiolaDrParams, LassoSolver, Sequence,
    SolverConfig,
};
use difb_oracles as oracle;

/// Largest distance between matching iterates. A run that stopped early on
/// an exactly zero residual is compared as if it stayed at its last point.
fn max_gap(a: &[DenseVector], b: &[Vec<f64>]) -> f64 {
    assert!(!a.is_empty() && a.len() <= b.len());
    let last = a.last().unwrap();
    b.iter()
        .enumerate()
        .map(|(i, y)| oracle::dist(a.get(i).unwrap_or(last).as_slice(), y))
        .fold(0.0, f64::max)
}

fn oracle_a(p: &oracle::Lasso) -> impl Fn(&[f64]) -> Vec<f64> + '_ {
    move |x| p.gradient(x)
}

fn oracle_fb(p: &oracle::Lasso, lambda: f64) -> impl Fn(&[f64]) -> Vec<f64> + '_ {
    move |x| {
        let g = p.gradient(x);
        let fwd: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a - lambda * b).collect();
        oracle::soft_vec(&fwd, lambda * p.mu)
    }
}

#[test]
fn difb_without_inertia_is_plain_forward_backward() {
    for seed in 0..5 {
        let p = oracle::random_lasso(seed, 12, 6, 0.1);
        let problem = SplitProblem::lasso(data_of(&p), p.mu).unwrap();
        let lambda = 1.2 * problem.alpha();
        let params = DifbParams::new(lambda, 0.0, 0.0, 0.5, 0.9).with_schedule(Sequence::Constant(1.0));
        let x0 = vec![0.3; 6];
        let cfg = SolverConfig::new(vector(&x0)).with_max_iters(500).with_record_iterates(true);
        let trace = solve_difb(&problem, &params, &cfg).unwrap();
        let plain = oracle::plain_forward_backward(
            oracle_a(&p),
            |x, l| oracle::soft_vec(x, l * p.mu),
            lambda,
            &x0,
            500,
        );
        let h = trace.iterates.unwrap();
        // h = [p₋₁, p₀, p₁, p₂, …] with p₁ = x₀
        assert!(max_gap(&h[2..], &plain) <= 1e-12);
    }
}

#[test]
fn mann_without_inertia_is_plain_mann() {
    for seed in 0..5 {
        let p = oracle::random_lasso(seed, 12, 6, 0.1);
        let problem = SplitProblem::lasso(data_of(&p), p.mu).unwrap();
        let step = problem.alpha();
        let params = DongMannParams {
            alpha_seq: Sequence::ZeroThen(0.0),
            beta_seq: Sequence::ZeroThen(0.0),
            gamma_seq: Sequence::Constant(0.6),
        };
        let x0 = vec![-0.2; 6];
        let cfg = SolverConfig::new(vector(&x0)).with_max_iters(500).with_record_iterates(true);
        let trace =
            solve_dong_mann(|v| forward_backward_map(&problem, step, v), &params, &cfg).unwrap();
        let plain = oracle::plain_mann(oracle_fb(&p, step), 0.6, &x0, 500);
        assert!(max_gap(&trace.iterates.unwrap(), &plain) <= 1e-12);
    }
}

#[test]
fn douglas_rachford_without_inertia_is_plain() {
    for seed in 0..5 {
        let p = oracle::random_lasso(seed, 12, 6, 0.1);
        let data = data_of(&p);
        let rho = 1.0 / data.lipschitz();
        let params = IyiolaDrParams { alpha: 0.0, beta: 0.0, rho };
        let x0 = vec![0.1; 6];
        let cfg = SolverConfig::new(vector(&x0)).with_max_iters(500).with_record_iterates(true);
        let trace = solve_iyiola_dr(&data, p.mu, &params, &cfg).unwrap();
        let plain = oracle::plain_douglas_rachford(&p, rho, &x0, 500);
        assert!(max_gap(&trace.iterates.unwrap(), &plain) <= 1e-12);
    }
}

#[test]
fn all_solvers_reach_the_exhaustive_optimum() {
    for (seed, d) in [(1u64, 3usize), (2, 5), (3, 6), (4, 8)] {
        let p = oracle::random_lasso(seed, d + 10, d, 0.15);
        let (_, best) = p.exhaustive_optimum();
        let data = data_of(&p);
        let mut objectives = Vec::new();
        for a in Algorithm::ALL {
            let cfg = SolverConfig::zeros(d).with_max_iters(50_000).with_residual_tol(1e-13);
            let trace = solve_lasso(data.clone(), p.mu, &LassoSolver::defaults(a), &cfg).unwrap();
            let obj = p.objective(trace.final_point.as_slice());
            assert!((obj - best).abs() <= 1e-6, "{a} seed {seed}: {obj} vs {best}");
            objectives.push(obj);
        }
        let spread = objectives.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v))
            - objectives.iter().fold(f64::INFINITY, |m, &v| m.min(v));
        assert!(spread <= 1e-5);
    }
}

#[test]
fn every_solver_stays_at_an_optimum() {
    for seed in 0..3 {
        let p = oracle::random_lasso(seed, 12, 4, 0.2);
        let (beta, _) = p.exhaustive_optimum();
        let data = data_of(&p);
        // Douglas–Rachford iterates γ with shadow J^B(γ); its fixed point
        // over β* is β* − ρ∇f(β*)
        let rho = 1.0 / data.lipschitz();
        let grad = p.gradient(&beta);
        let dr_seed: Vec<f64> = beta.iter().zip(&grad).map(|(b, g)| b - rho * g).collect();
        for a in Algorithm::ALL {
            let seed = if a == Algorithm::IyiolaDr { &dr_seed } else { &beta };
            let cfg = SolverConfig::new(vector(seed))
                .with_max_iters(50)
                .with_record_iterates(true);
            let trace = solve_lasso(data.clone(), p.mu, &LassoSolver::defaults(a), &cfg).unwrap();
            let drift = trace
                .iterates
                .unwrap()
                .iter()
                .map(|x| oracle::dist(x.as_slice(), seed))
                .fold(0.0, f64::max);
            assert!(drift <= 1e-12, "{a}: drift {drift}");
        }
    }
}

#[test]
fn increments_vanish() {
    let p = oracle::random_lasso(7, 15, 6, 0.1);
    let data = data_of(&p);
    for a in Algorithm::ALL {
        let cfg = SolverConfig::zeros(6).with_max_iters(300);
        let trace = solve_lasso(data.clone(), p.mu, &LassoSolver::defaults(a), &cfg).unwrap();
        let first = trace.step_diffs[0];
        let last = *trace.step_diffs.last().unwrap();
        assert!(last < first, "{a}: {first} -> {last}");
    }
}

#[test]
fn runs_are_deterministic() {
    let p = oracle::random_lasso(8, 15, 6, 0.1);
    let data = data_of(&p);
    for a in Algorithm::ALL {
        let cfg = SolverConfig::zeros(6).with_max_iters(200);
        let run = || solve_lasso(data.clone(), p.mu, &LassoSolver::defaults(a), &cfg).unwrap();
        let (x, y) = (run(), run());
        assert_eq!(x.final_point, y.final_point);
        assert_eq!(x.residuals, y.residuals);
        assert_eq!(x.step_diffs, y.step_diffs);
        assert_eq!(x.step_sizes, y.step_sizes);
    }
}

#[test]
fn douglas_rachford_shadow_solves_least_squares_without_penalty() {
    let p = oracle::random_lasso(9, 12, 5, 0.0);
    let data = data_of(&p);
    let params = IyiolaDrParams { alpha: 0.2, beta: -0.05, rho: 1.0 / data.lipschitz() };
    let cfg = SolverConfig::zeros(5).with_max_iters(20_000);
    let trace = solve_iyiola_dr(&data, 0.0, &params, &cfg).unwrap();
    let normal = solve_spd(&data.h().gram(), &matvec_transposed(data.h(), data.t()).unwrap()).unwrap();
    let best = data.loss(&normal).unwrap().sqrt();
    let got = data.loss(&trace.final_point).unwrap().sqrt();
    assert!(got - best <= 1e-6);
}

/// Runs the double-inertial method to convergence and checks the energy
/// sequences against the final point.
fn lyapunov_holds(seed: u64) -> Result<(), String> {
    let d = 2 + (seed as usize % 9);
    let p = oracle::random_lasso(seed, d + 10, d, 0.1);
    let problem = SplitProblem::lasso(data_of(&p), p.mu).unwrap();
    let alpha = problem.alpha();
    let params = suggest_params(alpha, 1.5 * alpha, 0.5, 0.9).unwrap();
    let cfg = SolverConfig::zeros(d)
        .with_max_iters(3000)
        .with_record_iterates(true);
    let trace = solve_difb(&problem, &params, &cfg).unwrap();
    let diag = trace.lyapunov.unwrap();
    if !(diag.c1 > 0.0 && diag.c2 > 0.0) {
        return Err(format!("seed {seed}: c1 = {}, c2 = {}", diag.c1, diag.c2));
    }
    if diag.min_gamma() < -1e-8 {
        return Err(format!("seed {seed}: min Γ = {}", diag.min_gamma()));
    }
    if !diag.is_descending(1e-8) {
        return Err(format!("seed {seed}: Γ̄ rises by {}", diag.max_increase()));
    }
    Ok(())
}

#[test]
fn lyapunov_energy_descends() {
    for seed in 0..25 {
        lyapunov_holds(seed).unwrap();
    }
}
