//! Exponent vectors `J = (j₀, …, j_N)` and their graded enumeration.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::partition::binomial;

/// Exponent vector of a monomial `ξ^J = ξ₀^{j₀}⋯ξ_N^{j_N}`.
///
/// Ordered graded-lexicographically: higher total degree is larger, and within a
/// degree the first differing exponent decides, so `ξ₀^d` is the largest
/// monomial of degree `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(nvars: usize) -> Self {
        MultiIndex(vec![0; nvars])
    }

    /// `e_i` scaled by `weight`.
    pub fn unit(nvars: usize, i: usize, weight: u32) -> Self {
        let mut e = vec![0; nvars];
        e[i] = weight;
        MultiIndex(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    /// `|J| = Σ jᵢ`.
    pub fn length(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `[J] = {i : jᵢ ≠ 0}`.
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &j)| j != 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    /// `J + K`.
    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        assert_eq!(self.nvars(), other.nvars());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `mJ`.
    pub fn scale(&self, m: u32) -> MultiIndex {
        MultiIndex(self.0.iter().map(|a| a * m).collect())
    }

    /// `J − e_i`, when `jᵢ > 0`.
    pub fn decrement(&self, i: usize) -> Option<MultiIndex> {
        if self.0[i] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[i] -= 1;
        Some(MultiIndex(e))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.length()
            .cmp(&other.length())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|j| j.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `N_δ = C(N + δ, N)`, the number of monomials of degree `δ` in `N + 1` variables.
pub fn n_delta(n: u32, delta: u32) -> BigUint {
    binomial(n as u64 + delta as u64, n as u64)
}

/// All exponent vectors of length `degree` in `nvars` variables, in decreasing
/// graded-lex order (`ξ₀^degree` first).
pub fn multi_indices(nvars: usize, degree: u32) -> Vec<MultiIndex> {
    fn rec(i: usize, remaining: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        let nvars = cur.len();
        if i == nvars - 1 {
            cur[i] = remaining;
            out.push(MultiIndex(cur.clone()));
            cur[i] = 0;
            return;
        }
        for j in (0..=remaining).rev() {
            cur[i] = j;
            rec(i + 1, remaining - j, cur, out);
        }
        cur[i] = 0;
    }
    assert!(nvars > 0, "need at least one variable");
    let mut out = Vec::new();
    rec(0, degree, &mut vec![0; nvars], &mut out);
    out
}
