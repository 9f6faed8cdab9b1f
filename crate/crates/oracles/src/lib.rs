//! Reference implementations for tests, written against plain `Vec<f64>`
//! and sharing no code with the crates under test.

#![allow(clippy::needless_range_loop)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type Vector = Vec<f64>;
/// Row-major: `m[i][j]`.
pub type Matrix = Vec<Vec<f64>>;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    norm(&sub(a, b))
}

pub fn mat_vec(m: &Matrix, v: &[f64]) -> Vector {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn mat_t_vec(m: &Matrix, v: &[f64]) -> Vector {
    let cols = m.first().map_or(0, Vec::len);
    let mut out = vec![0.0; cols];
    for (row, &vi) in m.iter().zip(v) {
        for (o, &mij) in out.iter_mut().zip(row) {
            *o += mij * vi;
        }
    }
    out
}

/// `MᵀM`.
pub fn gram(m: &Matrix) -> Matrix {
    let cols = m.first().map_or(0, Vec::len);
    let mut g = vec![vec![0.0; cols]; cols];
    for row in m {
        for i in 0..cols {
            for j in 0..cols {
                g[i][j] += row[i] * row[j];
            }
        }
    }
    g
}

/// Gaussian elimination with partial pivoting; `None` when singular.
pub fn gauss_solve(a: &Matrix, b: &[f64]) -> Option<Vector> {
    let n = b.len();
    let mut m: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let scale = a.iter().flatten().fold(0.0_f64, |s, v| s.max(v.abs())).max(1.0);
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[pivot][col].abs() <= 1e-12 * scale {
            return None;
        }
        m.swap(col, pivot);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..=n {
                m[r][c] -= f * m[col][c];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| m[r][c] * x[c]).sum();
        x[r] = (m[r][n] - s) / m[r][r];
    }
    Some(x)
}

pub fn soft(x: f64, tau: f64) -> f64 {
    if x > tau {
        x - tau
    } else if x < -tau {
        x + tau
    } else {
        0.0
    }
}

pub fn soft_vec(x: &[f64], tau: f64) -> Vector {
    x.iter().map(|&v| soft(v, tau)).collect()
}

/// A LASSO instance `½‖Hβ − t‖² + μ‖β‖₁`.
#[derive(Debug, Clone)]
pub struct Lasso {
    pub h: Matrix,
    pub t: Vector,
    pub mu: f64,
}

impl Lasso {
    pub fn dim(&self) -> usize {
        self.h.first().map_or(0, Vec::len)
    }

    pub fn objective(&self, beta: &[f64]) -> f64 {
        let r = sub(&mat_vec(&self.h, beta), &self.t);
        0.5 * dot(&r, &r) + self.mu * beta.iter().map(|b| b.abs()).sum::<f64>()
    }

    /// `Hᵀ(Hβ − t)`.
    pub fn gradient(&self, beta: &[f64]) -> Vector {
        mat_t_vec(&self.h, &sub(&mat_vec(&self.h, beta), &self.t))
    }

    /// Largest violation of the optimality conditions
    /// `−∇_i ∈ μ ∂|β_i|`.
    pub fn kkt_violation(&self, beta: &[f64]) -> f64 {
        self.gradient(beta)
            .iter()
            .zip(beta)
            .map(|(&g, &b)| {
                if b > 0.0 {
                    (g + self.mu).abs()
                } else if b < 0.0 {
                    (g - self.mu).abs()
                } else {
                    (g.abs() - self.mu).max(0.0)
                }
            })
            .fold(0.0, f64::max)
    }

    /// Exact minimiser by enumerating all `3^d` sign patterns: on each
    /// pattern the objective is smooth, so its stationary point solves
    /// `H_Aᵀ H_A β_A = H_Aᵀ t − μ s_A`; only sign-consistent solutions are
    /// kept.
    pub fn exhaustive_optimum(&self) -> (Vector, f64) {
        let d = self.dim();
        assert!(d <= 12, "exhaustive oracle is exponential in d");
        let g = gram(&self.h);
        let htt = mat_t_vec(&self.h, &self.t);
        let mut best = (vec![0.0; d], self.objective(&vec![0.0; d]));
        let mut signs = vec![0i8; d];
        for code in 0..3usize.pow(d as u32) {
            let mut c = code;
            for s in signs.iter_mut() {
                *s = (c % 3) as i8 - 1;
                c /= 3;
            }
            let active: Vec<usize> = (0..d).filter(|&i| signs[i] != 0).collect();
            if active.is_empty() {
                continue;
            }
            let sub_g: Matrix = active
                .iter()
                .map(|&i| active.iter().map(|&j| g[i][j]).collect())
                .collect();
            let rhs: Vector = active
                .iter()
                .map(|&i| htt[i] - self.mu * signs[i] as f64)
                .collect();
            let Some(sol) = gauss_solve(&sub_g, &rhs) else {
                continue;
            };
            if active.iter().zip(&sol).any(|(&i, &b)| b * signs[i] as f64 <= 0.0) {
                continue;
            }
            let mut beta = vec![0.0; d];
            for (&i, &b) in active.iter().zip(&sol) {
                beta[i] = b;
            }
            let obj = self.objective(&beta);
            if obj < best.1 {
                best = (beta, obj);
            }
        }
        best
    }
}

/// Gaussian design with `rows` samples and `d` features, targets from a
/// sparse planted vector plus noise, and `μ = frac·‖Hᵀt‖_∞`.
pub fn random_lasso(seed: u64, rows: usize, d: usize, frac: f64) -> Lasso {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h: Matrix = (0..rows)
        .map(|_| (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect())
        .collect();
    let planted: Vector = (0..d)
        .map(|_| {
            if rng.gen_bool(0.5) {
                rng.gen_range(-2.0..2.0)
            } else {
                0.0
            }
        })
        .collect();
    let t: Vector = mat_vec(&h, &planted)
        .into_iter()
        .map(|v| v + 0.1 * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let mu = frac * mat_t_vec(&h, &t).iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    Lasso { h, t, mu }
}

/// `p_{k+1} = J_λ^B(p_k − λ A p_k)`; returns `[p₀, …, p_iters]`.
pub fn plain_forward_backward(
    a: impl Fn(&[f64]) -> Vector,
    resolvent: impl Fn(&[f64], f64) -> Vector,
    lambda: f64,
    x0: &[f64],
    iters: usize,
) -> Vec<Vector> {
    let mut out = vec![x0.to_vec()];
    for _ in 0..iters {
        let p = out.last().unwrap();
        let ap = a(p);
        let forward: Vector = p.iter().zip(&ap).map(|(x, g)| x - lambda * g).collect();
        out.push(resolvent(&forward, lambda));
    }
    out
}

/// `v_{n+1} = (1 − γ) v_n + γ T v_n`; returns `[v₀, …, v_iters]`.
pub fn plain_mann(t_map: impl Fn(&[f64]) -> Vector, gamma: f64, x0: &[f64], iters: usize) -> Vec<Vector> {
    let mut out = vec![x0.to_vec()];
    for _ in 0..iters {
        let v = out.last().unwrap();
        let tv = t_map(v);
        out.push(v.iter().zip(&tv).map(|(x, y)| (1.0 - gamma) * x + gamma * y).collect());
    }
    out
}

/// Douglas–Rachford on a LASSO instance:
/// `θ_{n+1} = J^A(2J^B θ_n − θ_n) + θ_n − J^B θ_n` with `J^A` the
/// least-squares resolvent `(I + ρHᵀH)⁻¹(· + ρHᵀt)` and `J^B` soft
/// thresholding at `ρμ`. Returns `[θ₀, …, θ_iters]`.
pub fn plain_douglas_rachford(problem: &Lasso, rho: f64, x0: &[f64], iters: usize) -> Vec<Vector> {
    let d = problem.dim();
    let mut system = gram(&problem.h);
    for (i, row) in system.iter_mut().enumerate() {
        for v in row.iter_mut() {
            *v *= rho;
        }
        row[i] += 1.0;
    }
    let rho_htt: Vector = mat_t_vec(&problem.h, &problem.t).iter().map(|v| rho * v).collect();
    let mut out = vec![x0.to_vec()];
    for _ in 0..iters {
        let theta = out.last().unwrap();
        let jb = soft_vec(theta, rho * problem.mu);
        let rhs: Vector = (0..d).map(|i| 2.0 * jb[i] - theta[i] + rho_htt[i]).collect();
        let ja = gauss_solve(&system, &rhs).expect("I + ρHᵀH is nonsingular");
        out.push((0..d).map(|i| ja[i] + theta[i] - jb[i]).collect());
    }
    out
}

/// Largest eigenvalue of a symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_max_eigenvalue(a: &Matrix) -> f64 {
    let n = a.len();
    let mut m = a.clone();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum();
        if off < 1e-24 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let tau = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let t = if tau == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    (0..n).map(|i| m[i][i]).fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_solves_small_system() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let x = gauss_solve(&a, &[3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-14 && (x[1] - 1.4).abs() < 1e-14);
        assert!(gauss_solve(&vec![vec![1.0, 2.0], vec![2.0, 4.0]], &[1.0, 2.0]).is_none());
    }

    #[test]
    fn exhaustive_matches_separable_closed_form() {
        // diagonal H separates: β_i = soft(h_i t_i, μ)/h_i²
        let p = Lasso {
            h: vec![vec![1.0, 0.0], vec![0.0, 2.0]],
            t: vec![3.0, -0.1],
            mu: 0.5,
        };
        let (beta, _) = p.exhaustive_optimum();
        assert!((beta[0] - 2.5).abs() < 1e-14);
        assert_eq!(beta[1], 0.0);
        assert!(p.kkt_violation(&beta) < 1e-12);
    }

    #[test]
    fn exhaustive_optimum_satisfies_kkt() {
        for seed in 0..20 {
            let p = random_lasso(seed, 12, 5, 0.1);
            let (beta, obj) = p.exhaustive_optimum();
            assert!(p.kkt_violation(&beta) < 1e-9, "seed {seed}");
            assert!((p.objective(&beta) - obj).abs() < 1e-12);
        }
    }

    #[test]
    fn jacobi_eigenvalue() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 2.0]];
        assert!((symmetric_max_eigenvalue(&a) - 3.0).abs() < 1e-12);
    }
}
