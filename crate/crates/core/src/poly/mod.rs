//! Exact scalars and homogeneous polynomials on projective space.

pub mod chart;
pub mod homog;
pub mod multi_index;
pub mod scalar;

pub use chart::Chart;
pub use homog::HomogPoly;
pub use multi_index::{multi_indices, n_delta, MultiIndex};
pub use scalar::{Fp, PrimeField, Rational, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("expected {expected} variables, got {got}")]
    VariableCount { expected: usize, got: usize },
    #[error("expected degree {expected}, got {got}")]
    DegreeMismatch { expected: u32, got: u32 },
    #[error("point lies on the hyperplane at infinity of chart {chart}")]
    OnHyperplaneAtInfinity { chart: usize },
    #[error("chart {chart} out of range for {nvars} variables")]
    ChartOutOfRange { chart: usize, nvars: usize },
    #[error("invalid polynomial JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}
