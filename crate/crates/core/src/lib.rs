//! Operator-splitting solvers for monotone inclusions `0 ∈ Az + Bz`, with a
//! double-inertial relaxed forward-backward method, five baselines, and an
//! extreme learning machine whose output layer is trained by any of them.

// `!(x > 0.0)` style checks also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod elm;
pub mod error;
pub mod linalg;
pub mod metrics;
pub mod operators;
pub mod solvers;

pub use error::{Error, Result};
