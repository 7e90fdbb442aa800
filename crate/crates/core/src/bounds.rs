//! Effective degree bounds, all in exact big-integer arithmetic.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::partition::{Partition, PartitionError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("codimension condition c(k+1) >= N fails: {c}·({k}+1) < {n}")]
    Codimension { n: u32, c: u32, k: u32 },
    #[error("λ has {k} parts but at most N-1 = {max} are allowed")]
    TooManyParts { k: u32, max: u32 },
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("degree {d0} is below the threshold d(d+1) = {threshold}")]
    BelowThreshold { d0: String, threshold: String },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

fn pow(base: &BigUint, e: u64) -> BigUint {
    num_traits::pow::pow(base.clone(), e as usize)
}

fn check_regime(n: u32, c: u32, lambda: &Partition) -> Result<u32, BoundsError> {
    let k = lambda.len() as u32;
    if c == 0 || c > n {
        return Err(BoundsError::Invalid(format!(
            "need 1 <= c <= N, got c={c}, N={n}"
        )));
    }
    if k > n.saturating_sub(1) {
        return Err(BoundsError::TooManyParts {
            k,
            max: n.saturating_sub(1),
        });
    }
    if (c as u64) * (k as u64 + 1) < n as u64 {
        return Err(BoundsError::Codimension { n, c, k });
    }
    Ok(k)
}

/// `N + k(N − k)`, the smallest admissible `δ`.
pub fn min_delta(n: u32, k: u32) -> BigUint {
    BigUint::from(n) + BigUint::from(k) * BigUint::from(n - k)
}

/// `∏_j δ_j^{k+1} / δ_i`, ceiled; the flag reports whether it was integral.
pub fn nakayama_m(deltas: &[BigUint], k: u32, i: usize) -> Result<(BigUint, bool), BoundsError> {
    if deltas.is_empty() || i >= deltas.len() || deltas.iter().any(|d| d.is_zero()) {
        return Err(BoundsError::Invalid(
            "need positive δ's and a valid index".into(),
        ));
    }
    let prod: BigUint = deltas.iter().map(|d| pow(d, k as u64 + 1)).product();
    let (q, r) = prod.div_rem(&deltas[i]);
    if r.is_zero() {
        Ok((q, true))
    } else {
        Ok((q + 1u32, false))
    }
}

/// Parameter tuple of the main theorem. Integers serialize as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundLedger {
    pub n: u32,
    pub c: u32,
    pub lambda: Partition,
    pub k: u32,
    /// `|λ*₊|`.
    pub weight: u64,
    #[serde(with = "crate::decimal::vec")]
    pub delta: Vec<BigUint>,
    #[serde(with = "crate::decimal::vec")]
    pub m: Vec<BigUint>,
    /// Indices where `∏δ_j^{k+1}/δ_i` is not an integer.
    pub m_ceiled: Vec<usize>,
    #[serde(with = "crate::decimal::vec")]
    pub eps: Vec<BigUint>,
    #[serde(with = "crate::decimal")]
    pub r: BigUint,
    /// `|λ*₊| Σ_p m_p(ε_p + δ_p)`.
    #[serde(with = "crate::decimal")]
    pub threshold: BigUint,
    #[serde(with = "crate::decimal")]
    pub u: BigUint,
    #[serde(with = "crate::decimal::vec")]
    pub d: Vec<BigUint>,
}

impl BoundLedger {
    /// Re-checks every invariant; returns the violated ones.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let c = self.c as usize;
        if (self.c as u64) * (self.k as u64 + 1) < self.n as u64 {
            out.push("c(k+1) >= N".to_string());
        }
        if self.lambda.len() as u32 != self.k {
            out.push("k = number of parts of λ".to_string());
        }
        if self.weight != self.lambda.ampleness_weight() {
            out.push("weight = |λ*₊|".to_string());
        }
        if [self.delta.len(), self.m.len(), self.eps.len(), self.d.len()]
            .iter()
            .any(|&l| l != c)
        {
            out.push("one δ, m, ε, d per equation".to_string());
            return out;
        }
        let dmin = min_delta(self.n, self.k);
        let prod: BigUint = self
            .delta
            .iter()
            .map(|d| pow(d, self.k as u64 + 1))
            .product();
        let mut threshold = BigUint::zero();
        for i in 0..c {
            if self.delta[i] < dmin {
                out.push(format!("δ_{} >= N + k(N-k)", i + 1));
            }
            if &self.m[i] * &self.delta[i] < prod {
                out.push(format!("m_{} >= ∏δ_j^(k+1)/δ_{}", i + 1, i + 1));
            }
            if self.eps[i].is_zero() {
                out.push(format!("ε_{} >= 1", i + 1));
            }
            threshold += &self.m[i] * (&self.eps[i] + &self.delta[i]);
        }
        threshold *= BigUint::from(self.weight);
        if threshold != self.threshold {
            out.push("threshold = |λ*₊| Σ m_p(ε_p+δ_p)".to_string());
        }
        if self.r <= threshold {
            out.push("r > |λ*₊| Σ m_p(ε_p+δ_p)".to_string());
        } else if self.u != &self.r - &threshold {
            out.push("u = r - |λ*₊| Σ m_p(ε_p+δ_p)".to_string());
        }
        for i in 0..c {
            if self.d[i] != &self.delta[i] * (&self.r + 1u32) + &self.eps[i] {
                out.push(format!("d_{} = δ_{}(r+1) + ε_{}", i + 1, i + 1, i + 1));
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), BoundsError> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(BoundsError::Infeasible(v.join("; ")))
        }
    }
}

/// Optional replacements for the minimal choices of [`theorem_params`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LedgerOverrides {
    pub delta: Option<Vec<BigUint>>,
    pub m: Option<Vec<BigUint>>,
    pub eps: Option<Vec<BigUint>>,
    pub r: Option<BigUint>,
}

/// Fills the theorem's parameters with their minimal admissible values,
/// applying `overrides`, and re-validates the result.
pub fn theorem_params(
    n: u32,
    c: u32,
    lambda: &Partition,
    overrides: &LedgerOverrides,
) -> Result<BoundLedger, BoundsError> {
    let k = check_regime(n, c, lambda)?;
    let cu = c as usize;
    let sized = |name: &str, v: &Option<Vec<BigUint>>| -> Result<(), BoundsError> {
        match v {
            Some(v) if v.len() != cu => Err(BoundsError::Infeasible(format!(
                "{name} override needs {cu} entries, got {}",
                v.len()
            ))),
            _ => Ok(()),
        }
    };
    sized("δ", &overrides.delta)?;
    sized("m", &overrides.m)?;
    sized("ε", &overrides.eps)?;
    let delta = overrides
        .delta
        .clone()
        .unwrap_or_else(|| vec![min_delta(n, k); cu]);
    if delta.iter().any(|d| d.is_zero()) {
        return Err(BoundsError::Infeasible("δ must be positive".into()));
    }
    let mut m = Vec::with_capacity(cu);
    let mut m_ceiled = Vec::new();
    for i in 0..cu {
        let (mi, integral) = nakayama_m(&delta, k, i)?;
        if !integral {
            m_ceiled.push(i);
        }
        m.push(mi);
    }
    if let Some(mo) = &overrides.m {
        m = mo.clone();
    }
    let eps = overrides
        .eps
        .clone()
        .unwrap_or_else(|| vec![BigUint::one(); cu]);
    let weight = lambda.ampleness_weight();
    let mut threshold = BigUint::zero();
    for i in 0..cu {
        threshold += &m[i] * (&eps[i] + &delta[i]);
    }
    threshold *= BigUint::from(weight);
    let r = overrides.r.clone().unwrap_or_else(|| &threshold + 1u32);
    let u = if r > threshold {
        &r - &threshold
    } else {
        BigUint::zero()
    };
    let d = (0..cu).map(|i| &delta[i] * (&r + 1u32) + &eps[i]).collect();
    let ledger = BoundLedger {
        n,
        c,
        lambda: lambda.clone(),
        k,
        weight,
        delta,
        m,
        m_ceiled,
        eps,
        r,
        threshold,
        u,
        d,
    };
    ledger.validate()?;
    Ok(ledger)
}

/// Which exponent of `N + k(N−k)` the bound uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundVariant {
    /// `c(k+1) + 1`, matching the worked example.
    Corollary,
    /// `c(k+1)`, as stated in the introduction.
    IntroVariant,
}

/// The fixed choices behind the corollary: `δ = N + k(N−k)`,
/// `r = 2c|λ*₊|δ^{c(k+1)} − 1`, `d = δ(r+1)`, computed for the primitive
/// partition `λ / gcd(λ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryRoute {
    pub primitive: Partition,
    pub weight: u64,
    #[serde(with = "crate::decimal")]
    pub delta: BigUint,
    #[serde(with = "crate::decimal")]
    pub r: BigUint,
    #[serde(with = "crate::decimal")]
    pub d: BigUint,
}

pub fn corollary_route(n: u32, c: u32, lambda: &Partition) -> Result<CorollaryRoute, BoundsError> {
    let primitive = lambda.primitive();
    let k = check_regime(n, c, &primitive)?;
    let weight = primitive.ampleness_weight();
    let delta = min_delta(n, k);
    let r = BigUint::from(2 * c as u64 * weight) * pow(&delta, c as u64 * (k as u64 + 1)) - 1u32;
    let d = &delta * (&r + 1u32);
    Ok(CorollaryRoute {
        primitive,
        weight,
        delta,
        r,
        d,
    })
}

/// `(1 + 2c|λ*₊|(N+k(N−k))^e)²` with `e = c(k+1)+1` (corollary) or
/// `e = c(k+1)` (intro variant), for the primitive partition.
pub fn corollary_bound(
    n: u32,
    c: u32,
    lambda: &Partition,
    variant: BoundVariant,
) -> Result<BigUint, BoundsError> {
    let primitive = lambda.primitive();
    let k = check_regime(n, c, &primitive)?;
    let weight = primitive.ampleness_weight();
    let e = c as u64 * (k as u64 + 1)
        + match variant {
            BoundVariant::Corollary => 1,
            BoundVariant::IntroVariant => 0,
        };
    let inner = BigUint::one() + BigUint::from(2 * c as u64 * weight) * pow(&min_delta(n, k), e);
    Ok(&inner * &inner)
}

/// `d₀ = p(d+1) + q(d+2)` with `q = d₀ mod (d+1)`, `p = (d₀−q)/(d+1) − q`,
/// valid for `d₀ ≥ d(d+1)`.
pub fn decompose_degree(d: &BigUint, d0: &BigUint) -> Result<(BigUint, BigUint), BoundsError> {
    if d.is_zero() {
        return Err(BoundsError::Invalid("need d >= 1".into()));
    }
    let threshold = d * (d + 1u32);
    if d0 < &threshold {
        return Err(BoundsError::BelowThreshold {
            d0: d0.to_string(),
            threshold: threshold.to_string(),
        });
    }
    let d1 = d + 1u32;
    let q = d0 % &d1;
    let p = (d0 - &q) / &d1 - &q;
    debug_assert_eq!(&p * &d1 + &q * (d + 2u32), *d0);
    Ok((p, q))
}

/// Factor degrees of one product `H_i`: `(degree, multiplicity)` pairs, so
/// huge plans are never expanded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanEntry {
    #[serde(with = "crate::decimal")]
    pub d_i: BigUint,
    #[serde(with = "crate::decimal")]
    pub p: BigUint,
    #[serde(with = "crate::decimal")]
    pub q: BigUint,
    pub factors: Vec<FactorGroup>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorGroup {
    #[serde(with = "crate::decimal")]
    pub degree: BigUint,
    #[serde(with = "crate::decimal")]
    pub multiplicity: BigUint,
}

impl PlanEntry {
    /// `Σ degree · multiplicity`.
    pub fn total_degree(&self) -> BigUint {
        self.factors
            .iter()
            .map(|f| &f.degree * &f.multiplicity)
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoupPlan {
    pub route: CorollaryRoute,
    #[serde(with = "crate::decimal")]
    pub threshold: BigUint,
    pub entries: Vec<PlanEntry>,
}

/// Splits each `d_i ≥ d(d+1)` into `p_i` factors of degree `d+1` and `q_i`
/// of degree `d+2`, where `d` comes from [`corollary_route`].
pub fn coup_product_plan(
    n: u32,
    c: u32,
    lambda: &Partition,
    ds: &[BigUint],
) -> Result<CoupPlan, BoundsError> {
    let route = corollary_route(n, c, lambda)?;
    if ds.len() != c as usize {
        return Err(BoundsError::Invalid(format!(
            "need {c} degrees, got {}",
            ds.len()
        )));
    }
    let d = &route.d;
    let entries = ds
        .iter()
        .map(|di| {
            let (p, q) = decompose_degree(d, di)?;
            let mut factors = Vec::new();
            if !p.is_zero() {
                factors.push(FactorGroup {
                    degree: d + 1u32,
                    multiplicity: p.clone(),
                });
            }
            if !q.is_zero() {
                factors.push(FactorGroup {
                    degree: d + 2u32,
                    multiplicity: q.clone(),
                });
            }
            Ok(PlanEntry {
                d_i: di.clone(),
                p,
                q,
                factors,
            })
        })
        .collect::<Result<Vec<_>, BoundsError>>()?;
    Ok(CoupPlan {
        threshold: d * (d + 1u32),
        route,
        entries,
    })
}

/// The two hyperbolicity degree bounds and the comparisons made about them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperbolicityBounds {
    pub n: u32,
    /// `(N+1)^{2N+6}`.
    #[serde(with = "crate::decimal")]
    pub d_n: BigUint,
    /// `⌈N/2 − 1⌉`.
    pub c_prime: Option<u32>,
    /// `4(c′+1)(N + c′(N−c′))^{N+1}`.
    #[serde(with = "opt_decimal")]
    pub d_n_prime: Option<BigUint>,
    /// `⌊2(N+1)((N−2)/2)^{2N+2}⌋`.
    #[serde(with = "opt_decimal")]
    pub majorant_floor: Option<BigUint>,
    pub d_n_prime_lt_d_n: Option<bool>,
    pub d_n_prime_le_majorant: Option<bool>,
}

mod opt_decimal {
    use num_bigint::BigUint;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.serialize_str(&x.to_string()),
            None => s.serialize_none(),
        }
    }
}

pub fn hyperbolicity_bounds(n: u32) -> HyperbolicityBounds {
    let nb = BigUint::from(n);
    let d_n = pow(&(&nb + 1u32), 2 * n as u64 + 6);
    if n < 3 {
        return HyperbolicityBounds {
            n,
            d_n,
            c_prime: None,
            d_n_prime: None,
            majorant_floor: None,
            d_n_prime_lt_d_n: None,
            d_n_prime_le_majorant: None,
        };
    }
    // ⌈N/2 − 1⌉ = ⌈(N−2)/2⌉ = ⌊(N−1)/2⌋
    let cp = (n - 1) / 2;
    let base = BigUint::from(n) + BigUint::from(cp) * BigUint::from(n - cp);
    let d_n_prime = BigUint::from(4u32) * BigUint::from(cp + 1) * pow(&base, n as u64 + 1);
    // 2(N+1)(N−2)^{2N+2} / 2^{2N+2}, floored
    let e = 2 * n as u64 + 2;
    let majorant = (BigUint::from(2u32) * (&nb + 1u32) * pow(&BigUint::from(n - 2), e))
        / pow(&BigUint::from(2u32), e);
    HyperbolicityBounds {
        n,
        d_n_prime_lt_d_n: Some(d_n_prime < d_n),
        d_n_prime_le_majorant: Some(d_n_prime <= majorant),
        d_n,
        c_prime: Some(cp),
        d_n_prime: Some(d_n_prime),
        majorant_floor: Some(majorant),
    }
}
