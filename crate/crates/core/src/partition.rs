//! Partitions and Young-diagram combinatorics.
//!
//! A [`Partition`] is stored densely as its weakly decreasing list of positive
//! parts. From it we derive the conjugate partition, the jump sequence used to
//! index partial flag varieties, the ampleness weight `|λ*₊| = 2λ₁ + λ₂ + ⋯ + λₖ`,
//! the Brückmann–Rackwitz vanishing predicate and a few dimension counts
//! (Schur modules by the hook-content formula, partial flag varieties).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("a partition needs at least one part")]
    Empty,
    #[error("partition parts must be positive (got 0 at position {0})")]
    ZeroPart(usize),
    #[error("partition parts must be weakly decreasing ({prev} < {next} at position {pos})")]
    NotDecreasing { pos: usize, prev: u32, next: u32 },
    #[error("cannot parse partition part {0:?}")]
    Parse(String),
    #[error("codimension c={c} must satisfy 1 <= c <= N={n}")]
    InvalidCodimension { n: u32, c: u32 },
    #[error("the sub-critical regime needs (k+1)c < N, got (k+1)c = {lhs} >= N = {n}")]
    NotSubcritical { lhs: u64, n: u32 },
    #[error("a jump sequence with s1 = {s1} does not fit in dimension {n} (need s1 <= n-1)")]
    FlagTooLarge { s1: u32, n: u32 },
    #[error("multiplicity vector and value vector differ in length")]
    MultiplicityMismatch,
}

/// A partition `λ₁ ≥ ⋯ ≥ λₖ > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = PartitionError;

    fn try_from(parts: Vec<u32>) -> Result<Self, Self::Error> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self, PartitionError> {
        if parts.is_empty() {
            return Err(PartitionError::Empty);
        }
        for (i, &p) in parts.iter().enumerate() {
            if p == 0 {
                return Err(PartitionError::ZeroPart(i));
            }
            if i > 0 && parts[i - 1] < p {
                return Err(PartitionError::NotDecreasing {
                    pos: i,
                    prev: parts[i - 1],
                    next: p,
                });
            }
        }
        Ok(Partition { parts })
    }

    /// The partition `(1^k)`.
    pub fn column(k: u32) -> Self {
        assert!(k > 0, "column partition needs k >= 1");
        Partition {
            parts: vec![1; k as usize],
        }
    }

    /// Builds a partition from `(value, multiplicity)` pairs, e.g. `[(3, 2), (1, 1)]`
    /// for `(3, 3, 1)`. Pairs with zero multiplicity are skipped.
    pub fn from_multiplicities(pairs: &[(u32, u32)]) -> Result<Self, PartitionError> {
        let mut parts = Vec::new();
        for &(value, mult) in pairs {
            parts.extend(std::iter::repeat_n(value, mult as usize));
        }
        Partition::new(parts)
    }

    /// The multiplicity-coded form: distinct parts in decreasing order with counts.
    pub fn to_multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((v, m)) if *v == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of parts `k`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `λ₁`.
    pub fn largest(&self) -> u32 {
        self.parts[0]
    }

    /// `λᵢ` with 1-based indexing and `λᵢ = 0` beyond the last part.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    /// `|λ|`.
    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    pub fn gcd(&self) -> u32 {
        self.parts.iter().fold(0u32, |g, &p| g.gcd(&p))
    }

    /// `λ / gcd(λ)`.
    pub fn primitive(&self) -> Partition {
        let g = self.gcd();
        Partition {
            parts: self.parts.iter().map(|&p| p / g).collect(),
        }
    }

    /// `mλ`.
    pub fn scaled(&self, m: u32) -> Partition {
        assert!(m > 0, "scaling factor must be positive");
        Partition {
            parts: self.parts.iter().map(|&p| p * m).collect(),
        }
    }

    /// `λ*ⱼ = #{i | λᵢ ≥ j}`.
    pub fn conjugate(&self) -> Partition {
        let parts = (1..=self.largest())
            .map(|j| self.parts.iter().take_while(|&&p| p >= j).count() as u32)
            .collect();
        Partition { parts }
    }

    /// The jump sequence `s₁ > ⋯ > s_t`: the indices `i` with `λᵢ > λᵢ₊₁`
    /// (with `λₖ₊₁ = 0`), together with the multiplicities `bᵢ` for which
    /// `λ* = (s₁^{b₁}, …, s_t^{b_t})`.
    pub fn jump_sequence(&self) -> JumpSequence {
        let k = self.parts.len();
        let mut values = Vec::new();
        let mut multiplicities = Vec::new();
        for i in (1..=k).rev() {
            let drop = self.part(i) - self.part(i + 1);
            if drop > 0 {
                values.push(i as u32);
                multiplicities.push(drop);
            }
        }
        JumpSequence {
            values,
            multiplicities,
        }
    }

    /// `|λ*₊| = Σⱼ (λ*ⱼ + 1) = |λ| + λ₁`.
    pub fn ampleness_weight(&self) -> u64 {
        self.size() + self.largest() as u64
    }

    /// `(2λ₁ + λ₂ + ⋯ + λₖ) / gcd(λ)`, the weight of the primitive partition.
    pub fn normalized_ampleness_weight(&self) -> u64 {
        self.ampleness_weight() / self.gcd() as u64
    }

    /// Iterates the cells `(row, col)` of the Young diagram, 0-based.
    fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (0..p as usize).map(move |j| (i, j)))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", strs.join(","))
    }
}

impl FromStr for Partition {
    type Err = PartitionError;

    /// Parses a comma-separated list such as `5,3,3,1`; surrounding parentheses are allowed.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = trimmed
            .split(',')
            .map(|t| {
                let t = t.trim();
                t.parse::<u32>()
                    .map_err(|_| PartitionError::Parse(t.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Partition::new(parts)
    }
}

/// Jump sequence `s₁ > ⋯ > s_t` with the multiplicities `b₁, …, b_t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JumpSequence {
    pub values: Vec<u32>,
    pub multiplicities: Vec<u32>,
}

impl JumpSequence {
    pub fn new(values: Vec<u32>, multiplicities: Vec<u32>) -> Result<Self, PartitionError> {
        if values.len() != multiplicities.len() {
            return Err(PartitionError::MultiplicityMismatch);
        }
        if values.is_empty() {
            return Err(PartitionError::Empty);
        }
        if values.windows(2).any(|w| w[0] <= w[1]) || values.last() == Some(&0) {
            return Err(PartitionError::Parse(
                "jump values must be strictly decreasing and positive".into(),
            ));
        }
        if multiplicities.contains(&0) {
            return Err(PartitionError::Parse(
                "multiplicities must be positive".into(),
            ));
        }
        Ok(JumpSequence {
            values,
            multiplicities,
        })
    }

    /// The Grassmannian sequence `(k)` with a single factor.
    pub fn grassmannian(k: u32) -> Self {
        JumpSequence {
            values: vec![k],
            multiplicities: vec![1],
        }
    }

    /// `s₁`, which equals the number of parts of the originating partition.
    pub fn first(&self) -> u32 {
        self.values[0]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Recovers `λ* = (s₁^{b₁}, …, s_t^{b_t})`.
    pub fn conjugate_partition(&self) -> Partition {
        let pairs: Vec<(u32, u32)> = self
            .values
            .iter()
            .copied()
            .zip(self.multiplicities.iter().copied())
            .collect();
        Partition::from_multiplicities(&pairs).expect("valid jump sequence")
    }

    /// Recovers `λ` itself.
    pub fn partition(&self) -> Partition {
        self.conjugate_partition().conjugate()
    }

    /// `Σ bᵢ(sᵢ + 1)`, i.e. `|λ*₊|`: the total size of one Plücker product.
    pub fn total_minor_size(&self) -> u64 {
        self.values
            .iter()
            .zip(&self.multiplicities)
            .map(|(&s, &b)| (s as u64 + 1) * b as u64)
            .sum()
    }
}

/// Brückmann–Rackwitz predicate `λ*₁ + ⋯ + λ*_c < N − c`; conjugate parts past
/// the end count as zero.
pub fn br_vanishes(n: u32, c: u32, lambda: &Partition) -> Result<bool, PartitionError> {
    if c < 1 || c > n {
        return Err(PartitionError::InvalidCodimension { n, c });
    }
    let conj = lambda.conjugate();
    let lhs: u64 = (1..=c as usize).map(|j| conj.part(j) as u64).sum();
    Ok(lhs < (n - c) as u64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OptimalityEntry {
    pub m: u32,
    pub conjugate_sum: u64,
    pub vanishes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OptimalityReport {
    pub n: u32,
    pub c: u32,
    pub lambda: Partition,
    pub k: u32,
    pub entries: Vec<OptimalityEntry>,
    pub violations: Vec<u32>,
}

impl OptimalityReport {
    pub fn all_vanish(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `H⁰(X, S^{mλ}Ω_X) = 0` through the Brückmann–Rackwitz predicate for
/// `c ≤ m ≤ m_max`, in the regime `(k+1)c < N` where ampleness is excluded.
pub fn optimality_audit(
    n: u32,
    c: u32,
    lambda: &Partition,
    m_max: u32,
) -> Result<OptimalityReport, PartitionError> {
    if c < 1 || c > n {
        return Err(PartitionError::InvalidCodimension { n, c });
    }
    let k = lambda.len() as u32;
    let lhs = (k as u64 + 1) * c as u64;
    if lhs >= n as u64 {
        return Err(PartitionError::NotSubcritical { lhs, n });
    }
    let mut entries = Vec::new();
    let mut violations = Vec::new();
    for m in c..=m_max {
        let scaled = lambda.scaled(m);
        let conj = scaled.conjugate();
        let conjugate_sum: u64 = (1..=c as usize).map(|j| conj.part(j) as u64).sum();
        let vanishes = br_vanishes(n, c, &scaled)?;
        if !vanishes {
            violations.push(m);
        }
        entries.push(OptimalityEntry {
            m,
            conjugate_sum,
            vanishes,
        });
    }
    Ok(OptimalityReport {
        n,
        c,
        lambda: lambda.clone(),
        k,
        entries,
        violations,
    })
}

/// Rank of `S^λ` applied to an `n`-dimensional space, by the hook-content
/// formula `∏ (n + j − i) / hook(i, j)`. Zero when `λ` has more than `n` parts.
pub fn schur_dim(lambda: &Partition, n: u32) -> BigUint {
    if lambda.len() > n as usize {
        return BigUint::zero();
    }
    let conj = lambda.conjugate();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for (i, j) in lambda.cells() {
        let content = n as i64 + j as i64 - i as i64;
        num *= BigUint::from(content as u64);
        let arm = lambda.parts[i] as usize - j - 1;
        let leg = conj.parts()[j] as usize - i - 1;
        den *= BigUint::from((arm + leg + 1) as u64);
    }
    debug_assert!((&num % &den).is_zero());
    num / den
}

/// `C(n, k)` as a big integer; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= BigUint::from(n - i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientBound {
    #[serde(with = "crate::decimal")]
    pub lhs: BigUint,
    #[serde(with = "crate::decimal")]
    pub rhs: BigUint,
    pub ok: bool,
}

/// Compares `dim S^λ(kⁿ)` with the dimension of
/// `S^{λ_{s₁}}(Λ^{s₁}) ⊗ S^{λ_{s₂}−λ_{s₁}}(Λ^{s₂}) ⊗ ⋯ ⊗ S^{λ_{s_t}−λ_{s_{t−1}}}(Λ^{s_t})`,
/// of which `S^λ` is a quotient.
pub fn quotient_upper_bound(lambda: &Partition, n: u32) -> Result<QuotientBound, PartitionError> {
    let s = lambda.jump_sequence();
    if s.first() > n {
        return Err(PartitionError::FlagTooLarge { s1: s.first(), n });
    }
    let lhs = schur_dim(lambda, n);
    let mut rhs = BigUint::one();
    let mut prev_level = 0u32;
    for &si in &s.values {
        let exponent = lambda.part(si as usize) - prev_level;
        prev_level = lambda.part(si as usize);
        let wedge = binomial(n as u64, si as u64);
        // dim S^e(W) = C(w + e - 1, e)
        let w = u64::try_from(&wedge).expect("exterior power dimension fits in u64");
        rhs *= if w == 0 {
            if exponent == 0 {
                BigUint::one()
            } else {
                BigUint::zero()
            }
        } else {
            binomial(w + exponent as u64 - 1, exponent as u64)
        };
    }
    let ok = lhs <= rhs;
    Ok(QuotientBound { lhs, rhs, ok })
}

/// `dim Flag_s(kⁿ) = Σᵢ sᵢ(sᵢ₋₁ − sᵢ)` with `s₀ = n`.
pub fn flag_dim(s: &JumpSequence, n: u32) -> Result<u64, PartitionError> {
    if s.first() + 1 > n {
        return Err(PartitionError::FlagTooLarge { s1: s.first(), n });
    }
    let mut prev = n as u64;
    let mut dim = 0u64;
    for &si in &s.values {
        let si = si as u64;
        dim += si * (prev - si);
        prev = si;
    }
    Ok(dim)
}

/// All partitions of `n` in reverse lexicographic order (`(n)` first).
pub fn partitions_of(n: u32) -> Vec<Partition> {
    fn rec(remaining: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        for p in (1..=remaining.min(max_part)).rev() {
            prefix.push(p);
            rec(remaining - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, n, &mut Vec::new(), &mut out);
    }
    out
}

/// All partitions with `1 ≤ |λ| ≤ max_size`.
pub fn partitions_up_to(max_size: u32) -> Vec<Partition> {
    (1..=max_size).flat_map(partitions_of).collect()
}
