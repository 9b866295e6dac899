use thiserror::Error;

use crate::optimize::OptimizerTrace;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    /// The point set spans fewer dimensions than the ambient space.
    #[error("degenerate hull: affine rank {rank} < {dim}")]
    DegenerateHull { rank: usize, dim: usize },

    #[error("malformed hull: {0}")]
    MalformedHull(String),

    #[error("origin is not interior to the hull (support minimum {value:.3e})")]
    OriginNotInterior { value: f64 },

    #[error("unsupported dimension {dim} (expected {expected})")]
    UnsupportedDimension { dim: usize, expected: &'static str },

    #[error("optimizer diverged: length {length:.6} exceeds 10x initial {initial:.6}")]
    Divergence {
        length: f64,
        initial: f64,
        trace: Box<OptimizerTrace>,
    },

    /// Rejection sampling ran out of samples before finding an accepted point.
    #[error(
        "sample budget exhausted: {samples} drawn, {in_slabs} inside the slab intersection, \
         {accepted} with sufficient norm"
    )]
    BudgetExhausted {
        samples: u64,
        in_slabs: u64,
        accepted: u64,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
