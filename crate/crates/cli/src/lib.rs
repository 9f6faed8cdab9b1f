//! Experiment harness: sine regression and Iris classification with ELM
//! output layers trained by the splitting solvers, convergence traces, and
//! the inertial-parameter validator.

// `!(x > 0.0)` style checks also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod datasets;
pub mod error;
pub mod experiments;
pub mod output;

pub use error::{CliError, Result};
