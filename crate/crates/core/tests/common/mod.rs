#![allow(dead_code)]

use std::sync::Arc;

use difb_core::linalg::{DenseMatrix, DenseVector};
use difb_core::operators::LeastSquaresData;
use difb_oracles::Lasso;

pub fn vector(x: &[f64]) -> DenseVector {
    DenseVector::new(x.to_vec()).unwrap()
}

pub fn matrix(rows: &[Vec<f64>]) -> DenseMatrix {
    DenseMatrix::from_rows(rows).unwrap()
}

pub fn data_of(problem: &Lasso) -> Arc<LeastSquaresData> {
    Arc::new(LeastSquaresData::new(matrix(&problem.h), vector(&problem.t)).unwrap())
}
