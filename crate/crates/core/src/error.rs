use thiserror::Error;

use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("iterate diverged at iteration {iteration}")]
    Diverged { iteration: usize },
    #[error("step-size search failed at iteration {iteration} after {halvings} reductions")]
    StepSearchFailed { iteration: usize, halvings: usize },
    #[error("iterate history has {got} points, at least {needed} are required")]
    HistoryTooShort { got: usize, needed: usize },
    #[error("no feasible inertial parameters found: {0}")]
    Infeasible(String),
    #[error("model has not been trained")]
    Untrained,
    #[error("output column {column}: {source}")]
    Column {
        column: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("label {label} is out of range for {n_classes} classes")]
    LabelOutOfRange { label: usize, n_classes: usize },
    #[error("model file: {0}")]
    ModelFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
