use std::f64::consts::TAU;
use std::path::Path;

use difb_core::elm::UniformSource;
use difb_core::linalg::{DenseMatrix, DenseVector};

use crate::error::{CliError, Result};

pub const IRIS_CLASSES: [&str; 3] = ["setosa", "versicolor", "virginica"];

/// Points evaluated by regression reports.
pub const EVAL_GRID_POINTS: usize = 200;

/// `n` inputs drawn uniformly on `[0, 2π]` from the seeded generator, with
/// targets `sin(x)`.
pub fn gen_sine_dataset(n: usize, seed: u64) -> Result<(DenseMatrix, DenseVector)> {
    if n < 2 {
        return Err(CliError::Usage(format!("need at least 2 samples, got {n}")));
    }
    let mut rng = UniformSource::new(seed);
    let xs: Vec<f64> = (0..n).map(|_| rng.uniform(0.0, TAU)).collect();
    let ys = xs.iter().map(|x| x.sin()).collect();
    Ok((
        DenseMatrix::new(n, 1, xs).map_err(difb_core::Error::from)?,
        DenseVector::from_vec_unchecked(ys),
    ))
}

/// `EVAL_GRID_POINTS` evenly spaced points covering `[0, 2π]`.
pub fn eval_grid() -> Vec<f64> {
    let last = (EVAL_GRID_POINTS - 1) as f64;
    (0..EVAL_GRID_POINTS).map(|i| TAU * i as f64 / last).collect()
}

/// Reads `sepal_length,sepal_width,petal_length,petal_width,species` with a
/// header row; species names are matched case-insensitively.
pub fn load_iris_csv(path: &Path) -> Result<(DenseMatrix, Vec<usize>)> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let data_err = |line: u64, message: String| CliError::Data {
        path: path.to_path_buf(),
        line,
        message,
    };

    let header = reader.headers()?.clone();
    if header.len() != 5 {
        return Err(data_err(1, format!("expected 5 header columns, found {}", header.len())));
    }

    let mut features = Vec::new();
    let mut labels = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != 5 {
            return Err(data_err(line, format!("expected 5 fields, found {}", record.len())));
        }
        for field in record.iter().take(4) {
            let v: f64 = field
                .parse()
                .map_err(|_| data_err(line, format!("'{field}' is not a number")))?;
            if !v.is_finite() {
                return Err(data_err(line, format!("'{field}' is not finite")));
            }
            features.push(v);
        }
        let species = &record[4];
        let label = IRIS_CLASSES
            .iter()
            .position(|c| c.eq_ignore_ascii_case(species))
            .ok_or_else(|| data_err(line, format!("unknown species '{species}'")))?;
        labels.push(label);
    }
    if labels.is_empty() {
        return Err(data_err(1, "no data rows".into()));
    }
    let x = DenseMatrix::new(labels.len(), 4, features).map_err(difb_core::Error::from)?;
    Ok((x, labels))
}

/// `⌊frac·n⌋`, robust to `0.8·50 = 39.999…`.
fn portion(frac: f64, n: usize) -> usize {
    (frac * n as f64 + 1e-9).floor() as usize
}

fn check_fraction(fraction: f64) -> Result<()> {
    if fraction > 0.0 && fraction < 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("split fraction must lie in (0, 1), got {fraction}")))
    }
}

/// Seeded shuffle of `0..n`, then the first `⌊fraction·n⌋` indices train.
pub fn split_dataset(n: usize, fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    check_fraction(fraction)?;
    let mut idx: Vec<usize> = (0..n).collect();
    UniformSource::new(seed).shuffle(&mut idx);
    let n_train = portion(fraction, n);
    let test = idx.split_off(n_train);
    non_empty(idx, test)
}

/// Per-class version of [`split_dataset`]: each class is shuffled and gives
/// `⌊(1 − fraction)·n_c⌋` samples to test, the remainder to train. Index
/// lists are returned in ascending order.
pub fn stratified_split(
    labels: &[usize],
    n_classes: usize,
    fraction: f64,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    check_fraction(fraction)?;
    let mut rng = UniformSource::new(seed);
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for c in 0..n_classes {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == c).collect();
        rng.shuffle(&mut members);
        let n_test = portion(1.0 - fraction, members.len());
        test.extend_from_slice(&members[..n_test]);
        train.extend_from_slice(&members[n_test..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    non_empty(train, test)
}

fn non_empty(train: Vec<usize>, test: Vec<usize>) -> Result<(Vec<usize>, Vec<usize>)> {
    if train.is_empty() || test.is_empty() {
        return Err(CliError::Usage(format!(
            "split leaves an empty partition ({} train, {} test)",
            train.len(),
            test.len()
        )));
    }
    Ok((train, test))
}

/// Rows `idx` of `x`.
pub fn select_rows(x: &DenseMatrix, idx: &[usize]) -> DenseMatrix {
    let data = idx.iter().flat_map(|&i| x.row(i).iter().copied()).collect();
    DenseMatrix::new(idx.len(), x.cols(), data).expect("selected rows keep the column count")
}
