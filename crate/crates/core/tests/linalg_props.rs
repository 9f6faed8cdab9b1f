mod common;

use common::{matrix, vector};
use difb_core::linalg::{
    matvec, matvec_transposed, norm2, solve_spd, spectral_norm_gram, DenseMatrix,
};
use difb_oracles as oracle;
use proptest::prelude::*;

fn entries(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0..10.0f64, n)
}

fn matrix_strategy(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1..=max_rows, 1..=max_cols)
        .prop_flat_map(|(r, c)| prop::collection::vec(entries(c), r))
}

proptest! {
    #[test]
    fn matvec_matches_brute_force(m in matrix_strategy(6, 5), seed in 0u64..1000) {
        let cols = m[0].len();
        let v: Vec<f64> = (0..cols).map(|j| ((seed + j as u64) % 7) as f64 - 3.0).collect();
        let out = matvec(&matrix(&m), &vector(&v)).unwrap();
        let expected = oracle::mat_vec(&m, &v);
        for (a, b) in out.iter().zip(&expected) {
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn matvec_is_linear(
        m in matrix_strategy(5, 4),
        a in -3.0..3.0f64,
        b in -3.0..3.0f64,
        u in entries(4),
        v in entries(4),
    ) {
        let cols = m[0].len();
        let (u, v) = (vector(&u[..cols]), vector(&v[..cols]));
        let m = matrix(&m);
        let lhs = matvec(&m, &u.scale(a).add(&v.scale(b)).unwrap()).unwrap();
        let rhs = matvec(&m, &u).unwrap().scale(a).add(&matvec(&m, &v).unwrap().scale(b)).unwrap();
        let gap = lhs.distance(&rhs).unwrap();
        prop_assert!(gap <= 1e-10 * (1.0 + rhs.norm2()), "gap {}", gap);
    }

    #[test]
    fn transposed_product_matches_explicit_transpose(m in matrix_strategy(5, 4), v in entries(5)) {
        let m = matrix(&m);
        let v = vector(&v[..m.rows()]);
        let direct = matvec_transposed(&m, &v).unwrap();
        let via = matvec(&m.transpose(), &v).unwrap();
        prop_assert!(direct.distance(&via).unwrap() <= 1e-12 * (1.0 + via.norm2()));
    }

    #[test]
    fn norm_squared_is_self_dot(v in entries(7)) {
        let v = vector(&v);
        let d = v.dot(&v).unwrap();
        prop_assert!((norm2(&v).powi(2) - d).abs() <= 1e-12 * (1.0 + d));
    }

    #[test]
    fn spectral_estimate_bounds_rayleigh_quotients(m in matrix_strategy(6, 4), u in entries(4)) {
        let m = matrix(&m);
        let u = vector(&u[..m.cols()]);
        prop_assume!(u.norm2() > 1e-6);
        let u = u.scale(1.0 / u.norm2());
        let tol = 1e-8;
        let rho = spectral_norm_gram(&m, tol, 10_000).unwrap().value;
        let gu = matvec_transposed(&m, &matvec(&m, &u).unwrap()).unwrap();
        prop_assert!(rho >= gu.norm2() - tol * (1.0 + rho), "{} < {}", rho, gu.norm2());
    }

    #[test]
    fn spectral_estimate_matches_jacobi_eigensolver(m in matrix_strategy(6, 4)) {
        let rho = spectral_norm_gram(&matrix(&m), 1e-10, 100_000).unwrap().value;
        let exact = oracle::symmetric_max_eigenvalue(&oracle::gram(&m));
        prop_assert!((rho - exact).abs() <= 1e-6 * (1.0 + exact), "{} vs {}", rho, exact);
    }

    #[test]
    fn spd_solve_reproduces_rhs(g in prop::collection::vec(entries(5), 5), b in entries(5)) {
        // GᵀG + I is symmetric positive definite
        let gm = matrix(&g);
        let a = gm.gram().add_identity(1.0).unwrap();
        let b = vector(&b);
        let x = solve_spd(&a, &b).unwrap();
        let r = matvec(&a, &x).unwrap().distance(&b).unwrap();
        prop_assert!(r <= 1e-8 * (1.0 + b.norm2()));
    }
}

#[test]
fn spectral_estimate_matches_nalgebra() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let rows: Vec<Vec<f64>> = (0..6)
            .map(|_| (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect())
            .collect();
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        let nm = nalgebra::DMatrix::from_row_slice(6, 4, &flat);
        let eig = (nm.transpose() * &nm).symmetric_eigen();
        let exact = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let est = spectral_norm_gram(&matrix(&rows), 1e-8, 10_000).unwrap().value;
        assert!((est - exact).abs() <= 1e-6 * exact, "{est} vs {exact}");
    }
}

#[test]
fn non_finite_entries_are_rejected() {
    assert!(DenseMatrix::new(1, 2, vec![1.0, f64::INFINITY]).is_err());
    assert!(difb_core::linalg::DenseVector::new(vec![f64::NAN]).is_err());
}
