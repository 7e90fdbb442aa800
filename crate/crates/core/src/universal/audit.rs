//! Exact audit of the binomial inequalities behind the existence of the
//! open set `S°`.

use num_bigint::BigInt;
use serde::Serialize;

use crate::partition::binomial;

fn c(n: u64, k: u64) -> BigInt {
    BigInt::from(binomial(n, k))
}

/// `(k+1)k₀ − C(k₀+δ, k₀) + k − k² + (k₁−k₀)(k − C(k₀+δ−1, k₀))`.
pub fn open_set_expression(k: u32, delta: u32, k0: u32, k1: u32) -> BigInt {
    let (k, d, k0b, k1b) = (
        BigInt::from(k),
        delta as u64,
        BigInt::from(k0),
        BigInt::from(k1),
    );
    let k0u = k0 as u64;
    (&k + 1) * &k0b - c(k0u + d, k0u) + &k - &k * &k + (&k1b - &k0b) * (&k - c(k0u + d - 1, k0u))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InequalityCase {
    pub k0: u32,
    pub k1: u32,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpenSetAudit {
    pub k: u32,
    pub delta: u32,
    pub k0_max: u32,
    pub k1_max: u32,
    /// `δ ≥ k+1`; below it cases are reported, not asserted.
    pub in_regime: bool,
    pub cases_checked: usize,
    /// Cases where the main expression is `≥ 0`.
    pub non_negative: Vec<InequalityCase>,
    /// `k₀` with `k₀ − C(k₀+δ, k₀) ≥ 0` (only meaningful for `δ ≥ 2`).
    pub alpha_case_violations: Vec<u32>,
    /// `(n, N)` in range with `C(n+N, n) < nN`, or equality with `n, N ≥ 2`.
    pub helper_violations: Vec<(u32, u32)>,
}

impl OpenSetAudit {
    pub fn passed(&self) -> bool {
        self.non_negative.is_empty()
            && self.alpha_case_violations.is_empty()
            && self.helper_violations.is_empty()
    }
}

/// Evaluates the display for `1 ≤ k₀ ≤ k₁`, `k₀ ≤ k0_max`, `k₁ ≤ k1_max`,
/// the `α`-case bound for `k₀ ≤ k0_max` and the helper `C(n+N, n) ≥ nN`
/// for `1 ≤ n ≤ k0_max`, `1 ≤ N ≤ k1_max`.
pub fn audit_open_set_inequalities(k: u32, delta: u32, k0_max: u32, k1_max: u32) -> OpenSetAudit {
    let mut non_negative = Vec::new();
    let mut cases = 0;
    for k0 in 1..=k0_max {
        for k1 in k0..=k1_max {
            cases += 1;
            let v = open_set_expression(k, delta, k0, k1);
            if v >= BigInt::from(0) {
                non_negative.push(InequalityCase {
                    k0,
                    k1,
                    value: v.to_string(),
                });
            }
        }
    }
    let mut alpha_case_violations = Vec::new();
    if delta >= 2 {
        for k0 in 1..=k0_max {
            if BigInt::from(k0) - c(k0 as u64 + delta as u64, k0 as u64) >= BigInt::from(0) {
                alpha_case_violations.push(k0);
            }
        }
    }
    let mut helper_violations = Vec::new();
    for n in 1..=k0_max {
        for big_n in 1..=k1_max {
            let lhs = c(n as u64 + big_n as u64, n as u64);
            let rhs = BigInt::from(n) * BigInt::from(big_n);
            let strict = n >= 2 && big_n >= 2;
            if lhs < rhs || (strict && lhs == rhs) {
                helper_violations.push((n, big_n));
            }
        }
    }
    OpenSetAudit {
        k,
        delta,
        k0_max,
        k1_max,
        in_regime: delta > k,
        cases_checked: cases,
        non_negative,
        alpha_case_violations,
        helper_violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn audit_examples() {
        assert!(audit_open_set_inequalities(1, 2, 10, 10).passed());
        // helper at n = 1 is C(1+N, 1) = N + 1 ≥ N
        let a = audit_open_set_inequalities(1, 2, 1, 30);
        assert!(a.helper_violations.is_empty());
        let b = audit_open_set_inequalities(3, 3, 12, 12);
        assert!(!b.in_regime);
    }

    #[test]
    fn expression_by_hand() {
        // k=1, δ=2, k0=k1=1: 2 - 3 + 0 + 0
        assert_eq!(open_set_expression(1, 2, 1, 1), BigInt::from(-1));
        // k=1, δ=2, k0=1, k1=2: -1 + 1·(1 - 2)
        assert_eq!(open_set_expression(1, 2, 1, 2), BigInt::from(-2));
    }
}
