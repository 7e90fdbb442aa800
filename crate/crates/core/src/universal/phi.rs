//! The linear map `φ_η : S → (𝐤^{k+1})^{N_δ}, a ↦ A(a; η)` as an explicit
//! matrix, and the closed-form rank it is compared against.

use num_bigint::BigUint;
use rand::RngCore;
use serde::Serialize;

use crate::linalg::{kernel_basis, Matrix};
use crate::partition::binomial;
use crate::poly::{multi_indices, MultiIndex, Scalar};

use super::frame::{FlagFrame, StratumLabel};
use super::instance::{monomial_derivative, monomial_value, Instance};
use super::UniversalError;

/// Default cap on the number of entries of an explicit `φ_η` matrix.
pub const DEFAULT_BUDGET: usize = 2_000_000;

/// `(k+1)·C(k₀+δ, k₀) + (k₁−k₀)·C(k₀+δ−1, k₀)`.
pub fn rank_formula(k: u32, k0: u32, k1: u32, delta: u32) -> Result<BigUint, UniversalError> {
    if k0 < 1 || k1 < k0 || delta < 1 {
        return Err(UniversalError::InvalidInstance(format!(
            "rank formula needs 1 <= k0 <= k1 and delta >= 1, got k0={k0}, k1={k1}, delta={delta}"
        )));
    }
    let k0 = k0 as u64;
    let d = delta as u64;
    Ok(BigUint::from(k + 1) * binomial(k0 + d, k0)
        + BigUint::from(k1 - k0 as u32) * binomial(k0 + d - 1, k0))
}

/// Matrix of `φ_η` in the monomial basis. Rows are `(J, i)` for
/// `i = 0..=k`, columns are `(J, m)` with `|m| = ε`; both grouped by `J`.
#[derive(Clone, Debug)]
pub struct PhiEta<F: Scalar> {
    matrix: Matrix<F>,
    columns: Vec<MultiIndex>,
    monomials: Vec<MultiIndex>,
    block_rows: usize,
}

impl<F: Scalar> PhiEta<F> {
    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    pub fn columns(&self) -> &[MultiIndex] {
        &self.columns
    }

    pub fn block_rows(&self) -> usize {
        self.block_rows
    }

    pub fn block_cols(&self) -> usize {
        self.monomials.len()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    fn block_row_range(&self, b: usize) -> Vec<usize> {
        (b * self.block_rows..(b + 1) * self.block_rows).collect()
    }

    fn block_col_range(&self, b: usize) -> Vec<usize> {
        let m = self.block_cols();
        (b * m..(b + 1) * m).collect()
    }

    /// The `(k+1) × C(N+ε, N)` block of column `J` (by position).
    pub fn block(&self, b: usize) -> Matrix<F> {
        self.matrix
            .select(&self.block_row_range(b), &self.block_col_range(b))
    }

    /// Nonzero entries outside the diagonal blocks; zero by construction.
    pub fn off_block_nonzeros(&self) -> usize {
        let m = self.block_cols();
        let mut count = 0;
        for r in 0..self.matrix.rows() {
            for c in 0..self.matrix.cols() {
                if r / self.block_rows != c / m && !self.matrix.get(r, c).is_zero() {
                    count += 1;
                }
            }
        }
        count
    }

    /// Rank after projecting each of the `k+1` factors onto
    /// `H⁰(ℙ(𝐤_I), O(δ))`, i.e. keeping the rows with `[J] ∩ I = ∅`.
    pub fn restriction_rank(&self, i_set: &[usize]) -> usize {
        let rows: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .filter(|(_, j)| j.support().iter().all(|i| !i_set.contains(i)))
            .flat_map(|(b, _)| self.block_row_range(b))
            .collect();
        let cols: Vec<usize> = (0..self.matrix.cols()).collect();
        self.matrix.select(&rows, &cols).rank()
    }

    /// Number of restricted rows, `(k+1)·C(k₀+δ, k₀)` on `M_I`.
    pub fn restriction_target_dim(&self, i_set: &[usize]) -> usize {
        self.block_rows
            * self
                .columns
                .iter()
                .filter(|j| j.support().iter().all(|i| !i_set.contains(i)))
                .count()
    }

    /// A random element of `ker φ_η`, as coordinates on `S`. The kernel of a
    /// block-diagonal map is the sum of the block kernels.
    pub fn random_kernel_element<R: RngCore + ?Sized>(
        &self,
        ctx: &F::Ctx,
        rng: &mut R,
        height: u64,
    ) -> Vec<F> {
        let mut out = Vec::with_capacity(self.matrix.cols());
        for b in 0..self.columns.len() {
            let basis = kernel_basis(&self.block(b).to_rows(), ctx);
            let mut v = vec![F::zero(ctx); self.block_cols()];
            for kv in basis {
                let c = F::random(ctx, rng, height);
                for (vi, ki) in v.iter_mut().zip(kv) {
                    *vi = vi.add(&c.mul(&ki));
                }
            }
            out.extend(v);
        }
        out
    }

    /// Compares every block rank with its predicted value on `Σ(I, I′)`.
    pub fn classify_blocks(&self, label: &StratumLabel) -> Vec<BlockClass> {
        let ip = label.i_prime().unwrap_or(&[]);
        self.columns
            .iter()
            .enumerate()
            .map(|(b, j)| {
                let meet: Vec<usize> = j
                    .support()
                    .into_iter()
                    .filter(|i| label.i_set().contains(i))
                    .collect();
                let predicted = if meet.is_empty() {
                    self.block_rows
                } else if meet.len() == 1 && j.get(meet[0]) == 1 && !ip.contains(&meet[0]) {
                    1
                } else {
                    0
                };
                BlockClass {
                    column: j.clone(),
                    first_case: !meet.is_empty(),
                    rank: self.block(b).rank(),
                    predicted,
                }
            })
            .collect()
    }
}

/// Rank of one `J`-block against the prediction from the proof.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockClass {
    pub column: MultiIndex,
    /// `ξ^J(x) = 0`, i.e. `[J] ∩ I ≠ ∅`.
    pub first_case: bool,
    pub rank: usize,
    pub predicted: usize,
}

/// Builds the explicit matrix of `φ_η`, refusing when it would exceed
/// `budget` entries.
pub fn phi_eta_matrix<F: Scalar>(
    inst: &Instance,
    frame: &FlagFrame<F>,
    budget: usize,
) -> Result<PhiEta<F>, UniversalError> {
    if frame.k() != inst.k as usize || frame.x().len() != inst.nvars() {
        return Err(UniversalError::DegenerateFrame(
            "frame does not match the instance".into(),
        ));
    }
    let columns = inst.columns();
    let monomials = multi_indices(inst.nvars(), inst.eps);
    let block_rows = inst.k as usize + 1;
    let nrows = block_rows * columns.len();
    let ncols = monomials.len() * columns.len();
    let entries = nrows.saturating_mul(ncols);
    if entries > budget {
        return Err(UniversalError::SizeBudget { entries, budget });
    }
    let x = frame.x();
    let ctx = x[0].ctx();
    let r1 = F::from_i64(&ctx, inst.r as i64 + 1);
    let lifted: Vec<Vec<F>> = (0..frame.k()).map(|i| frame.lifted(i)).collect();
    let mono_vals: Vec<F> = monomials.iter().map(|m| monomial_value(m, x)).collect();
    let mono_ders: Vec<Vec<F>> = lifted
        .iter()
        .map(|w| {
            monomials
                .iter()
                .map(|m| monomial_derivative(m, x, w))
                .collect()
        })
        .collect();
    let mut matrix = Matrix::zeros(&ctx, nrows, ncols);
    for (b, j) in columns.iter().enumerate() {
        let xi_j = monomial_value(j, x);
        let dxi: Vec<F> = lifted
            .iter()
            .map(|w| monomial_derivative(j, x, w))
            .collect();
        for (mi, mv) in mono_vals.iter().enumerate() {
            let col = b * monomials.len() + mi;
            matrix.set(b * block_rows, col, mv.mul(&xi_j));
            for i in 0..frame.k() {
                let v = xi_j.mul(&mono_ders[i][mi]).add(&r1.mul(mv).mul(&dxi[i]));
                matrix.set(b * block_rows + i + 1, col, v);
            }
        }
    }
    Ok(PhiEta {
        matrix,
        columns,
        monomials,
        block_rows,
    })
}
