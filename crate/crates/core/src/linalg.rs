//! Dense vectors and matrices backing every iterate and design matrix.
//!
//! Storage is row-major `f64`. Values built from caller data are checked for
//! finiteness; values produced by arithmetic inside the crate are not, and the
//! solvers detect divergence on their own iterates instead.

use std::fmt;
use std::ops::Index;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("{op}: dimension mismatch between {left} and {right}")]
    DimensionMismatch {
        op: &'static str,
        left: String,
        right: String,
    },
    #[error("non-finite entry {value} at position {index}")]
    NonFinite { index: usize, value: f64 },
    #[error("data length {len} does not match shape {rows}x{cols}")]
    ShapeMismatch { rows: usize, cols: usize, len: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric: |a[{row},{col}] - a[{col},{row}]| = {gap:e}")]
    NotSymmetric { row: usize, col: usize, gap: f64 },
    #[error("matrix is not positive definite: pivot {pivot} is {value:e}")]
    NotPositiveDefinite { pivot: usize, value: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, LinalgError>;

fn check_finite(data: &[f64]) -> Result<()> {
    match data.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(LinalgError::NonFinite {
            index,
            value: data[index],
        }),
        None => Ok(()),
    }
}

#[derive(Clone, PartialEq, Default)]
pub struct DenseVector {
    data: Vec<f64>,
}

impl DenseVector {
    /// Builds a vector from caller data, rejecting NaN and infinities.
    pub fn new(data: Vec<f64>) -> Result<Self> {
        check_finite(&data)?;
        Ok(Self { data })
    }

    /// Wraps data without the finiteness scan. Used for values computed from
    /// already-checked inputs.
    pub fn from_vec_unchecked(data: Vec<f64>) -> Self {
        Self { data }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            data: vec![0.0; len],
        }
    }

    pub fn filled(len: usize, value: f64) -> Self {
        Self {
            data: vec![value; len],
        }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.data.iter()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_vec_unchecked(self.data.iter().map(|&v| f(v)).collect())
    }

    fn ensure_same_len(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.len() == other.len() {
            Ok(())
        } else {
            Err(LinalgError::DimensionMismatch {
                op,
                left: format!("vector[{}]", self.len()),
                right: format!("vector[{}]", other.len()),
            })
        }
    }

    pub fn dot(&self, other: &Self) -> Result<f64> {
        self.ensure_same_len(other, "dot")?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum())
    }

    pub fn norm2(&self) -> f64 {
        norm2(self)
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.map(|v| v * factor)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    /// `self + factor * other`.
    pub fn axpy(&self, factor: f64, other: &Self) -> Result<Self> {
        self.zip_with(other, "axpy", |a, b| a + factor * b)
    }

    /// `‖self - other‖`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.ensure_same_len(other, "distance")?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt())
    }

    pub fn zip_with(
        &self,
        other: &Self,
        op: &'static str,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<Self> {
        self.ensure_same_len(other, op)?;
        Ok(Self::from_vec_unchecked(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        ))
    }
}

impl fmt::Debug for DenseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.data).finish()
    }
}

impl Index<usize> for DenseVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.data[i]
    }
}

impl TryFrom<Vec<f64>> for DenseVector {
    type Error = LinalgError;

    fn try_from(data: Vec<f64>) -> Result<Self> {
        Self::new(data)
    }
}

#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    /// Builds a row-major matrix from caller data.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(LinalgError::ShapeMismatch {
                rows,
                cols,
                len: data.len(),
            });
        }
        check_finite(&data)?;
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(LinalgError::DimensionMismatch {
                op: "from_rows",
                left: format!("row of length {cols}"),
                right: format!("row of length {}", bad.len()),
            });
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub(crate) fn from_vec_unchecked(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        check_finite(values)?;
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> DenseVector {
        DenseVector::from_vec_unchecked((0..self.rows).map(|i| self.get(i, col)).collect())
    }

    pub fn transpose(&self) -> Self {
        let mut out = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self.get(i, j));
            }
        }
        Self::from_vec_unchecked(self.cols, self.rows, out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_vec_unchecked(
            self.rows,
            self.cols,
            self.data.iter().map(|v| v * factor).collect(),
        )
    }

    /// Matrix product `self · other`.
    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(shape_error("matmul", self, other));
        }
        let mut out = vec![0.0; self.rows * other.cols];
        for i in 0..self.rows {
            let out_row = &mut out[i * other.cols..(i + 1) * other.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(Self::from_vec_unchecked(self.rows, other.cols, out))
    }

    /// `selfᵀ · self`.
    pub fn gram(&self) -> DenseMatrix {
        let n = self.cols;
        let mut out = vec![0.0; n * n];
        for i in 0..self.rows {
            let r = self.row(i);
            for a in 0..n {
                let ra = r[a];
                if ra == 0.0 {
                    continue;
                }
                for b in a..n {
                    out[a * n + b] += ra * r[b];
                }
            }
        }
        for a in 0..n {
            for b in 0..a {
                out[a * n + b] = out[b * n + a];
            }
        }
        Self::from_vec_unchecked(n, n, out)
    }

    /// Returns `self + shift · I` for square matrices.
    pub fn add_identity(&self, shift: f64) -> Result<DenseMatrix> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            out.data[i * self.cols + i] += shift;
        }
        Ok(out)
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[f64]> = (0..self.rows).map(|i| self.row(i)).collect();
        f.debug_struct("DenseMatrix")
            .field("shape", &(self.rows, self.cols))
            .field("rows", &rows)
            .finish()
    }
}

fn shape_error(op: &'static str, m: &DenseMatrix, other: &DenseMatrix) -> LinalgError {
    LinalgError::DimensionMismatch {
        op,
        left: format!("matrix[{}x{}]", m.rows, m.cols),
        right: format!("matrix[{}x{}]", other.rows, other.cols),
    }
}

/// `m · v`.
pub fn matvec(m: &DenseMatrix, v: &DenseVector) -> Result<DenseVector> {
    if m.cols != v.len() {
        return Err(LinalgError::DimensionMismatch {
            op: "matvec",
            left: format!("matrix[{}x{}]", m.rows, m.cols),
            right: format!("vector[{}]", v.len()),
        });
    }
    let x = v.as_slice();
    Ok(DenseVector::from_vec_unchecked(
        (0..m.rows)
            .map(|i| m.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect(),
    ))
}

/// `mᵀ · v`, without materialising the transpose.
pub fn matvec_transposed(m: &DenseMatrix, v: &DenseVector) -> Result<DenseVector> {
    if m.rows != v.len() {
        return Err(LinalgError::DimensionMismatch {
            op: "matvec_transposed",
            left: format!("matrix[{}x{}]^T", m.rows, m.cols),
            right: format!("vector[{}]", v.len()),
        });
    }
    let mut out = vec![0.0; m.cols];
    for (i, &vi) in v.iter().enumerate() {
        if vi == 0.0 {
            continue;
        }
        for (o, &a) in out.iter_mut().zip(m.row(i)) {
            *o += a * vi;
        }
    }
    Ok(DenseVector::from_vec_unchecked(out))
}

/// Euclidean norm.
pub fn norm2(v: &DenseVector) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Outcome of [`spectral_norm_gram`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralEstimate {
    /// Estimate of `λ_max(MᵀM)`, i.e. the squared largest singular value.
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Largest eigenvalue of `MᵀM` by power iteration on the Gram operator.
///
/// The iteration starts from the normalised all-ones vector and stops once
/// the Rayleigh quotient changes by at most `tol` relative between sweeps.
/// If the start vector lands in the null space of a nonzero `M`, the first
/// coordinate is nudged by `1e-12` and the iteration continues.
pub fn spectral_norm_gram(m: &DenseMatrix, tol: f64, max_iter: usize) -> Result<SpectralEstimate> {
    if m.rows == 0 || m.cols == 0 {
        return Err(LinalgError::InvalidArgument(
            "spectral_norm_gram needs a nonempty matrix".into(),
        ));
    }
    if !(tol > 0.0) || max_iter == 0 {
        return Err(LinalgError::InvalidArgument(format!(
            "spectral_norm_gram needs tol > 0 and max_iter >= 1 (got {tol}, {max_iter})"
        )));
    }
    if m.is_zero() {
        return Ok(SpectralEstimate {
            value: 0.0,
            iterations: 0,
            converged: true,
        });
    }

    let n = m.cols;
    let mut v = DenseVector::filled(n, 1.0 / (n as f64).sqrt());
    let mut estimate = 0.0;
    let mut nudged = false;
    for it in 1..=max_iter {
        let mv = matvec(m, &v)?;
        let gv = matvec_transposed(m, &mv)?;
        // v is unit length, so ‖Mv‖² is the Rayleigh quotient of MᵀM.
        let rayleigh = mv.dot(&mv)?;
        let gnorm = gv.norm2();
        if gnorm == 0.0 {
            if nudged {
                return Ok(SpectralEstimate {
                    value: rayleigh,
                    iterations: it,
                    converged: false,
                });
            }
            nudged = true;
            let mut data = v.into_vec();
            data[0] += 1e-12;
            let nrm = data.iter().map(|x| x * x).sum::<f64>().sqrt();
            v = DenseVector::from_vec_unchecked(data.into_iter().map(|x| x / nrm).collect());
            continue;
        }
        if it > 1 && (rayleigh - estimate).abs() <= tol * rayleigh {
            return Ok(SpectralEstimate {
                value: rayleigh,
                iterations: it,
                converged: true,
            });
        }
        estimate = rayleigh;
        v = gv.scale(1.0 / gnorm);
    }
    Ok(SpectralEstimate {
        value: estimate,
        iterations: max_iter,
        converged: false,
    })
}

/// Lower-triangular Cholesky factor `L` with `A = L Lᵀ`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    lower: Vec<f64>,
}

const SYMMETRY_TOL: f64 = 1e-10;

impl Cholesky {
    pub fn factor(a: &DenseMatrix) -> Result<Self> {
        let (rows, cols) = a.shape();
        if rows != cols {
            return Err(LinalgError::NotSquare { rows, cols });
        }
        let n = rows;
        let scale = a.max_abs().max(1.0);
        for i in 0..n {
            for j in 0..i {
                let gap = (a.get(i, j) - a.get(j, i)).abs();
                if gap > SYMMETRY_TOL * scale {
                    return Err(LinalgError::NotSymmetric { row: i, col: j, gap });
                }
            }
        }

        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let mut d = a.get(j, j);
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            if !(d > 0.0) {
                return Err(LinalgError::NotPositiveDefinite { pivot: j, value: d });
            }
            let d = d.sqrt();
            l[j * n + j] = d;
            for i in j + 1..n {
                let mut s = a.get(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / d;
            }
        }
        Ok(Self { n, lower: l })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &DenseVector) -> Result<DenseVector> {
        let n = self.n;
        if b.len() != n {
            return Err(LinalgError::DimensionMismatch {
                op: "cholesky solve",
                left: format!("matrix[{n}x{n}]"),
                right: format!("vector[{}]", b.len()),
            });
        }
        let l = &self.lower;
        // forward: L y = b
        let mut y = b.as_slice().to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s -= l[i * n + k] * y[k];
            }
            y[i] = s / l[i * n + i];
        }
        // backward: Lᵀ x = y
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s -= l[k * n + i] * y[k];
            }
            y[i] = s / l[i * n + i];
        }
        Ok(DenseVector::from_vec_unchecked(y))
    }
}

/// Solves `a x = b` for symmetric positive definite `a`.
pub fn solve_spd(a: &DenseMatrix, b: &DenseVector) -> Result<DenseVector> {
    if a.rows() != b.len() {
        return Err(LinalgError::DimensionMismatch {
            op: "solve_spd",
            left: format!("matrix[{}x{}]", a.rows(), a.cols()),
            right: format!("vector[{}]", b.len()),
        });
    }
    Cholesky::factor(a)?.solve(b)
}
