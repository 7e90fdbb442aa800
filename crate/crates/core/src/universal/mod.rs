//! The universal family of hypersurfaces `E(a, ·) = Σ a_J ξ^{(r+1)J}`, its
//! rank matrix `A`, the strata `M_I`, `Σ(I, I′)` and the rank of `φ_η`.

pub mod audit;
pub mod frame;
pub mod instance;
pub mod phi;
pub mod rank;

pub use audit::{audit_open_set_inequalities, OpenSetAudit};
pub use frame::{sample_m_i, sample_sigma, sigma_dims, FlagFrame, SamplerDims, StratumLabel};
pub use instance::{alpha, build_e, Instance, ParameterPoint};
pub use phi::{phi_eta_matrix, rank_formula, PhiEta, DEFAULT_BUDGET};
pub use rank::{build_a, check_star, check_star_stratified, theta, RankMatrix, StarReport};

use crate::poly::{PolyError, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UniversalError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("index mismatch: {0}")]
    IndexMismatch(String),
    #[error("degenerate frame: {0}")]
    DegenerateFrame(String),
    #[error("unsatisfiable stratum label: {0}")]
    UnsatisfiableLabel(String),
    #[error("sampling failed after {0} retries")]
    SamplingFailure(usize),
    #[error("matrix with {entries} entries exceeds the budget of {budget}")]
    SizeBudget { entries: usize, budget: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl From<ScalarError> for UniversalError {
    fn from(e: ScalarError) -> Self {
        UniversalError::Poly(PolyError::Scalar(e))
    }
}
