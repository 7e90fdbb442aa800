//! Lazy coordinates of `Δ(a, η)`: products of one minor of size `sᵢ + 1`
//! for each of the `bᵢ` factors at level `i`.

use num_bigint::BigUint;

use crate::linalg::row_echelon;
use crate::partition::{binomial, JumpSequence};
use crate::poly::Scalar;
use crate::universal::{build_a, FlagFrame, Instance, ParameterPoint, RankMatrix};

use super::{minor_at, PluckerError};

/// One coordinate: the column positions chosen for each factor and the
/// product of the corresponding minors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaCoordinate<F: Scalar> {
    pub selectors: Vec<Vec<usize>>,
    pub value: F,
}

/// Handle on the coordinates of `Δ(a, η)` at a frame where `(*)` holds.
#[derive(Clone, Debug)]
pub struct DeltaCoordinates<F: Scalar> {
    a: RankMatrix<F>,
    sizes: Vec<usize>,
}

impl<F: Scalar> DeltaCoordinates<F> {
    pub fn rank_matrix(&self) -> &RankMatrix<F> {
        &self.a
    }

    /// Minor sizes per factor: `s₁+1` repeated `b₁` times, then `s₂+1`, ….
    pub fn factor_sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// `∏ C(N_δ, size)` over the factors, the total coordinate count.
    pub fn count(&self) -> BigUint {
        let n = self.a.matrix().cols() as u64;
        self.sizes.iter().map(|&s| binomial(n, s as u64)).product()
    }

    /// Every coordinate, in odometer order: the last factor varies fastest and
    /// each factor runs through increasing column combinations.
    pub fn iter(&self) -> DeltaIter<'_, F> {
        let ncols = self.a.matrix().cols();
        let state = if self.sizes.iter().all(|&s| s <= ncols) {
            Some(self.sizes.iter().map(|&s| (0..s).collect()).collect())
        } else {
            None
        };
        DeltaIter {
            coords: self,
            state,
        }
    }

    pub fn value(&self, selectors: &[Vec<usize>]) -> F {
        let ctx = self.a.matrix().get(0, 0).ctx();
        selectors.iter().fold(F::one(&ctx), |acc, cols| {
            acc.mul(&minor_at(self.a.matrix(), cols))
        })
    }

    /// A coordinate that does not vanish: each factor uses pivot columns of
    /// the first `size` rows of `A`, which are independent because `A` has
    /// full rank.
    pub fn witness(&self) -> DeltaCoordinate<F> {
        let rows = self.a.matrix().to_rows();
        let selectors: Vec<Vec<usize>> = self
            .sizes
            .iter()
            .map(|&s| {
                let (_, pivots) = row_echelon(rows[..s].to_vec());
                pivots
            })
            .collect();
        let value = self.value(&selectors);
        DeltaCoordinate { selectors, value }
    }
}

/// Lazy iterator over [`DeltaCoordinates`].
pub struct DeltaIter<'a, F: Scalar> {
    coords: &'a DeltaCoordinates<F>,
    state: Option<Vec<Vec<usize>>>,
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let size = c.len();
    let mut i = size;
    while i > 0 {
        i -= 1;
        if c[i] < n - size + i {
            c[i] += 1;
            for j in i + 1..size {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

impl<F: Scalar> Iterator for DeltaIter<'_, F> {
    type Item = DeltaCoordinate<F>;

    fn next(&mut self) -> Option<Self::Item> {
        let current = self.state.clone()?;
        let value = self.coords.value(&current);
        let n = self.coords.a.matrix().cols();
        let mut state = current.clone();
        let mut advanced = false;
        for f in (0..state.len()).rev() {
            if next_combination(&mut state[f], n) {
                advanced = true;
                break;
            }
            let s = state[f].len();
            state[f] = (0..s).collect();
        }
        self.state = if advanced { Some(state) } else { None };
        Some(DeltaCoordinate {
            selectors: current,
            value,
        })
    }
}

/// Coordinates of `Δ(a, η)` for the jump sequence `s` (with `s₁ = k`).
/// Fails when `A` is rank deficient at the frame.
pub fn delta_coords<F: Scalar>(
    inst: &Instance,
    a: &ParameterPoint<F>,
    frame: &FlagFrame<F>,
    s: &JumpSequence,
) -> Result<DeltaCoordinates<F>, PluckerError> {
    if s.first() != inst.k || frame.k() != inst.k as usize {
        return Err(PluckerError::InvalidSelector(format!(
            "jump sequence starts at {} but the frame carries {} vectors (k = {})",
            s.first(),
            frame.k(),
            inst.k
        )));
    }
    let m = build_a(inst, a, frame)?;
    let rank = m.rank();
    if rank != m.rows() {
        return Err(PluckerError::RankDeficient {
            rank,
            expected: m.rows(),
        });
    }
    let sizes = s
        .values
        .iter()
        .zip(&s.multiplicities)
        .flat_map(|(&v, &b)| std::iter::repeat_n(v as usize + 1, b as usize))
        .collect();
    Ok(DeltaCoordinates { a: m, sizes })
}
