//! Plücker coordinates of the rank matrix, the coordinates of `Δ(a, η)`,
//! transition laws of minors and the map `Ψ`.

pub mod cocycle;
pub mod delta;
pub mod psi;

pub use cocycle::{
    cocycle_check, minor_transition_check, product_transition_check, pullback_degree,
    section_matrix, CocycleVerdict, MinorVerdict,
};
pub use delta::{delta_coords, DeltaCoordinate, DeltaCoordinates, DeltaIter};
pub use psi::{psi, tangent_frame, verify_psi_in_y, PsiValue, PsiVerdict};

use crate::linalg::Matrix;
use crate::poly::{MultiIndex, PolyError, Scalar};
use crate::universal::{RankMatrix, UniversalError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PluckerError {
    #[error("selector repeats column {0}")]
    RepeatedColumn(String),
    #[error("invalid selector: {0}")]
    InvalidSelector(String),
    #[error("rank {rank} is below {expected}: the frame lies outside the (*) locus")]
    RankDeficient { rank: usize, expected: usize },
    #[error("frame is not tangent to the hypersurface: {0}")]
    NotTangent(String),
    #[error("invalid sections: {0}")]
    InvalidSections(String),
    #[error(transparent)]
    Universal(#[from] UniversalError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `l` distinct columns of `A`; the minor uses the first `l` rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PluckerSelector {
    columns: Vec<MultiIndex>,
}

impl PluckerSelector {
    pub fn new(columns: Vec<MultiIndex>) -> Result<Self, PluckerError> {
        if columns.is_empty() {
            return Err(PluckerError::InvalidSelector("no columns".into()));
        }
        for (i, c) in columns.iter().enumerate() {
            if columns[..i].contains(c) {
                return Err(PluckerError::RepeatedColumn(c.to_string()));
            }
        }
        Ok(PluckerSelector { columns })
    }

    pub fn size(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[MultiIndex] {
        &self.columns
    }

    fn positions<F: Scalar>(&self, a: &RankMatrix<F>) -> Result<Vec<usize>, PluckerError> {
        if self.size() > a.rows() {
            return Err(PluckerError::InvalidSelector(format!(
                "size {} exceeds the {} rows of A",
                self.size(),
                a.rows()
            )));
        }
        self.columns
            .iter()
            .map(|j| {
                a.column_position(j)
                    .ok_or_else(|| PluckerError::InvalidSelector(format!("no column {j}")))
            })
            .collect()
    }
}

/// Determinant of the first `l` rows of `m` on the given columns.
pub fn minor_at<F: Scalar>(m: &Matrix<F>, cols: &[usize]) -> F {
    let rows: Vec<usize> = (0..cols.len()).collect();
    m.select(&rows, cols).det()
}

/// The Plücker coordinate of `A` selected by `sel`.
pub fn plucker_minor<F: Scalar>(
    a: &RankMatrix<F>,
    sel: &PluckerSelector,
) -> Result<F, PluckerError> {
    let pos = sel.positions(a)?;
    Ok(minor_at(a.matrix(), &pos))
}
