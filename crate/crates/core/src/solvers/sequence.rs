use std::fmt;
use std::sync::Arc;

/// A real sequence indexed from `n = 1`, used for relaxation weights,
/// inertial weights and step-size increments.
#[derive(Clone)]
pub enum Sequence {
    Constant(f64),
    /// `0` at `n = 1`, then the given constant.
    ZeroThen(f64),
    /// `c / n²` (summable).
    InverseSquare(f64),
    Custom(Arc<dyn Fn(usize) -> f64 + Send + Sync>),
}

impl Sequence {
    pub fn custom(f: impl Fn(usize) -> f64 + Send + Sync + 'static) -> Self {
        Self::Custom(Arc::new(f))
    }

    pub fn at(&self, n: usize) -> f64 {
        match self {
            Self::Constant(c) => *c,
            Self::ZeroThen(c) => {
                if n <= 1 {
                    0.0
                } else {
                    *c
                }
            }
            Self::InverseSquare(c) => c / (n as f64 * n as f64),
            Self::Custom(f) => f(n),
        }
    }

    /// Checks `pred` on the first `horizon` terms (one term for constants),
    /// returning the first failing index.
    pub fn first_violation(&self, horizon: usize, pred: impl Fn(f64) -> bool) -> Option<usize> {
        let horizon = match self {
            Self::Constant(_) => 1,
            Self::ZeroThen(_) => horizon.min(2),
            _ => horizon,
        };
        (1..=horizon).find(|&n| !pred(self.at(n)))
    }

    pub fn is_nondecreasing(&self, horizon: usize) -> bool {
        let horizon = match self {
            Self::Constant(_) | Self::ZeroThen(_) => horizon.min(2),
            _ => horizon,
        };
        (2..=horizon).all(|n| self.at(n) >= self.at(n - 1))
    }
}

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(c) => write!(f, "Constant({c})"),
            Self::ZeroThen(c) => write!(f, "ZeroThen({c})"),
            Self::InverseSquare(c) => write!(f, "InverseSquare({c})"),
            Self::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}
