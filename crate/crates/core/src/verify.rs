//! Seeded audit suites. Every case draws from its own stream
//! `(seed, case path)`, so reports are identical across runs and thread
//! counts.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::partition::{Partition, PartitionError};
use crate::plucker::{
    cocycle_check, minor_transition_check, product_transition_check, pullback_degree,
    tangent_frame, verify_psi_in_y, PluckerError,
};
use crate::poly::{Chart, HomogPoly, Scalar};
use crate::rng::{derive_seed, stream_rng};
use crate::universal::{
    audit_open_set_inequalities, check_star, check_star_stratified, phi_eta_matrix, rank_formula,
    sample_m_i, sample_sigma, sigma_dims, FlagFrame, Instance, ParameterPoint, StarReport,
    StratumLabel, UniversalError,
};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Universal(#[from] UniversalError),
    #[error(transparent)]
    Plucker(#[from] PluckerError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// Uniform verdict of a suite: `passed` iff `counterexamples` is empty.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub check: &'static str,
    pub field: &'static str,
    pub seed: u64,
    pub cases: usize,
    pub passed: bool,
    pub details: Value,
    pub counterexamples: Vec<Value>,
}

impl SuiteReport {
    fn new<F: Scalar>(
        check: &'static str,
        ctx: &F::Ctx,
        seed: u64,
        cases: usize,
        details: Value,
        counterexamples: Vec<Value>,
    ) -> Self {
        SuiteReport {
            check,
            field: F::field_label(ctx),
            seed,
            cases,
            passed: counterexamples.is_empty(),
            details,
            counterexamples,
        }
    }
}

fn strings<F: Scalar>(v: &[F]) -> Vec<String> {
    v.iter().map(|c| c.to_string()).collect()
}

/// The grid `N ∈ {2,3,4}`, `k ∈ {1,2}` (`k ≤ N−1`), `δ ∈ {2,3}`, `ε ∈ {1,2}`.
pub fn small_grid() -> Vec<Instance> {
    let mut out = Vec::new();
    for n in 2..=4 {
        for k in 1..=2u32.min(n - 1) {
            for delta in 2..=3 {
                for eps in 1..=2 {
                    out.push(Instance::new(n, k, delta, eps, 1).expect("grid instance"));
                }
            }
        }
    }
    out
}

/// Admissible `(k₀, k₁)` for an instance: `1 ≤ k₀ ≤ k₁ ≤ N`, `k₁ ≥ k`.
pub fn admissible_k_pairs(inst: &Instance) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for k0 in 1..=inst.n {
        for k1 in k0.max(inst.k)..=inst.n {
            out.push((k0, k1));
        }
    }
    out
}

/// Cell index, `k0`, `k1`, and a counterexample if the rank disagreed.
type OracleOutcome = (usize, u32, u32, Option<Value>);

/// Rank of the explicit `φ_η` matrix against the closed form, on `frames`
/// random frames of `Σ(I, I′)` for every cell and admissible `(k₀, k₁)`.
pub fn rank_oracle<F: Scalar>(
    ctx: &F::Ctx,
    cells: &[Instance],
    frames: usize,
    seed: u64,
    height: u64,
    budget: usize,
) -> Result<SuiteReport, VerifyError> {
    let mut jobs = Vec::new();
    for (ci, inst) in cells.iter().enumerate() {
        for (k0, k1) in admissible_k_pairs(inst) {
            for f in 0..frames {
                jobs.push((ci, *inst, k0, k1, f));
            }
        }
    }
    let results: Vec<Result<OracleOutcome, VerifyError>> = jobs
        .par_iter()
        .map(|&(ci, inst, k0, k1, f)| {
            let mut rng = stream_rng(seed, &[ci as u64, k0 as u64, k1 as u64, f as u64]);
            let n = inst.n as usize;
            let mut all: Vec<usize> = (0..=n).collect();
            all.shuffle(&mut rng);
            let mut i_set = all[..n - k0 as usize].to_vec();
            let mut i_prime = i_set[..n - k1 as usize].to_vec();
            i_set.sort_unstable();
            i_prime.sort_unstable();
            let label = StratumLabel::new(inst.n, i_set.clone(), Some(i_prime.clone()))?;
            let frame: FlagFrame<F> = sample_sigma(ctx, &inst, &label, &mut rng, height)?;
            let phi = phi_eta_matrix(&inst, &frame, budget)?;
            let rank = phi.rank();
            let expected = rank_formula(inst.k, k0, k1, inst.delta)?;
            let cx = if num_bigint::BigUint::from(rank) == expected {
                None
            } else {
                Some(json!({
                    "instance": inst,
                    "k0": k0,
                    "k1": k1,
                    "frame_index": f,
                    "I": i_set,
                    "Iprime": i_prime,
                    "frame": frame.dump(),
                    "rank": rank,
                    "expected": expected.to_string(),
                }))
            };
            Ok((ci, k0, k1, cx))
        })
        .collect();
    let mut cells_out: Vec<Value> = Vec::new();
    let mut counterexamples = Vec::new();
    let mut last: Option<(usize, u32, u32)> = None;
    for r in results {
        let (ci, k0, k1, cx) = r?;
        if last != Some((ci, k0, k1)) {
            let inst = cells[ci];
            cells_out.push(json!({
                "N": inst.n,
                "k": inst.k,
                "delta": inst.delta,
                "eps": inst.eps,
                "k0": k0,
                "k1": k1,
                "expected": rank_formula(inst.k, k0, k1, inst.delta)?.to_string(),
                "frames": 0,
                "matched": 0,
            }));
            last = Some((ci, k0, k1));
        }
        let cell = cells_out.last_mut().expect("pushed above");
        cell["frames"] = json!(cell["frames"].as_u64().unwrap_or(0) + 1);
        match cx {
            None => cell["matched"] = json!(cell["matched"].as_u64().unwrap_or(0) + 1),
            Some(c) => counterexamples.push(c),
        }
    }
    let cases = jobs.len();
    Ok(SuiteReport::new::<F>(
        "rank-oracle",
        ctx,
        seed,
        cases,
        json!({ "cells": cells_out }),
        counterexamples,
    ))
}

/// `det B_V = g^l det B_{V′}` for random sections, points, charts and
/// vectors. `n` and `l` are drawn per sample when not fixed
/// (`N ≤ 3`, `l ≤ min(4, N+1)`).
pub fn cocycle<F: Scalar>(
    ctx: &F::Ctx,
    n: Option<u32>,
    l: Option<u32>,
    samples: usize,
    seed: u64,
    height: u64,
) -> Result<SuiteReport, VerifyError> {
    if n == Some(0) || l == Some(0) {
        return Err(VerifyError::Invalid("need N >= 1 and l >= 1".into()));
    }
    let results: Vec<Result<(bool, Option<Value>), VerifyError>> = (0..samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = stream_rng(seed, &[s as u64]);
            let n = n.unwrap_or_else(|| rng.gen_range(1..=3));
            let l = l.unwrap_or_else(|| rng.gen_range(1..=4.min(n + 1)));
            let d = rng.gen_range(1..=3u32);
            let nvars = n as usize + 1;
            let sections: Vec<HomogPoly<F>> = (0..l)
                .map(|_| HomogPoly::random(ctx, nvars, d, &mut rng, height))
                .collect();
            let x: Vec<F> = (0..nvars)
                .map(|_| F::random_nonzero(ctx, &mut rng, height))
                .collect();
            let v = rng.gen_range(0..nvars);
            let mut v_prime = rng.gen_range(0..nvars - 1);
            if v_prime >= v {
                v_prime += 1;
            }
            let vs: Vec<Vec<F>> = (1..l)
                .map(|_| (0..n).map(|_| F::random(ctx, &mut rng, height)).collect())
                .collect();
            let verdict = cocycle_check(&sections, Chart::new(v), Chart::new(v_prime), &x, &vs)?;
            let cx = (!verdict.holds).then(|| {
                json!({
                    "sample": s,
                    "N": n,
                    "l": l,
                    "d": d,
                    "V": v,
                    "Vprime": v_prime,
                    "sections": sections.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                    "x": strings(&x),
                    "v": vs.iter().map(|w| strings(w)).collect::<Vec<_>>(),
                    "det_V": verdict.det_v.to_string(),
                    "det_Vprime": verdict.det_v_prime.to_string(),
                    "factor": verdict.factor.to_string(),
                })
            });
            Ok((!verdict.det_v.is_zero(), cx))
        })
        .collect();
    let mut nonzero = 0;
    let mut counterexamples = Vec::new();
    for r in results {
        let (nz, cx) = r?;
        nonzero += nz as usize;
        counterexamples.extend(cx);
    }
    Ok(SuiteReport::new::<F>(
        "cocycle",
        ctx,
        seed,
        samples,
        json!({ "nonzero_determinants": nonzero }),
        counterexamples,
    ))
}

fn random_instance<R: Rng>(rng: &mut R, fixed: Option<Instance>) -> Instance {
    fixed.unwrap_or_else(|| {
        let n = rng.gen_range(2..=3);
        let k = rng.gen_range(1..n);
        let delta = rng.gen_range(1..=2);
        let eps = rng.gen_range(1..=2);
        let r = rng.gen_range(0..=2);
        Instance::new(n, k, delta, eps, r).expect("valid random instance")
    })
}

/// A random frame with all coordinates of `x` nonzero, moved to a random
/// chart; returns it with a second, different chart.
fn two_chart_frame<F: Scalar, R: Rng>(
    ctx: &F::Ctx,
    inst: &Instance,
    rng: &mut R,
    height: u64,
) -> Result<(FlagFrame<F>, Chart), VerifyError> {
    let label = StratumLabel::new(inst.n, vec![], None)?;
    let frame: FlagFrame<F> = sample_m_i(ctx, inst, &label, rng, height)?;
    let nvars = inst.nvars();
    let from = rng.gen_range(0..nvars);
    let mut to = rng.gen_range(0..nvars - 1);
    if to >= from {
        to += 1;
    }
    Ok((frame.transport(Chart::new(from))?, Chart::new(to)))
}

fn random_partition<R: Rng>(rng: &mut R, max_len: u32, max_part: u32) -> Partition {
    let len = rng.gen_range(1..=max_len);
    let mut parts: Vec<u32> = (0..len).map(|_| rng.gen_range(1..=max_part)).collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Partition::new(parts).expect("positive decreasing parts")
}

/// Ratio law for minors of `A` between two charts. Even samples test one
/// minor of random size `l` (twist `l(ε+δ)`); odd samples test a Plücker
/// product of a random type `λ` (twist `|λ*₊|(ε+δ)`).
pub fn minor_transition<F: Scalar>(
    ctx: &F::Ctx,
    inst: Option<Instance>,
    samples: usize,
    seed: u64,
    height: u64,
) -> Result<SuiteReport, VerifyError> {
    let results: Vec<Result<(bool, Option<Value>), VerifyError>> = (0..samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = stream_rng(seed, &[s as u64]);
            let inst = random_instance(&mut rng, inst);
            let a = ParameterPoint::<F>::random(ctx, &inst, &mut rng, height);
            let (frame, to) = two_chart_frame(ctx, &inst, &mut rng, height)?;
            let ncols = inst.num_columns();
            let pick = |rng: &mut rand_chacha::ChaCha8Rng, size: usize| {
                let mut cols: Vec<usize> = (0..ncols).collect();
                cols.shuffle(rng);
                cols.truncate(size);
                cols
            };
            let product = s % 2 == 1;
            let (verdict, lambda) = if product {
                let lambda = random_partition(&mut rng, inst.k, 3);
                let js = lambda.jump_sequence();
                let mut selectors = Vec::new();
                for (&sv, &b) in js.values.iter().zip(&js.multiplicities) {
                    for _ in 0..b {
                        selectors.push(pick(&mut rng, sv as usize + 1));
                    }
                }
                let v = product_transition_check(&inst, &a, &frame, &selectors, to)?;
                (v, Some(lambda))
            } else {
                let l = rng.gen_range(1..=inst.k as usize + 1);
                let cols = pick(&mut rng, l);
                (minor_transition_check(&inst, &a, &frame, &cols, to)?, None)
            };
            let exponent_ok = lambda
                .as_ref()
                .is_none_or(|l| pullback_degree(l, inst.eps, inst.delta) == verdict.exponent);
            let ok = verdict.holds && exponent_ok;
            let cx = (!ok).then(|| {
                json!({
                    "sample": s,
                    "instance": inst,
                    "lambda": lambda,
                    "frame": frame.dump(),
                    "to": to.index(),
                    "verdict": verdict,
                })
            });
            Ok((product, cx))
        })
        .collect();
    let mut products = 0;
    let mut counterexamples = Vec::new();
    for r in results {
        let (p, cx) = r?;
        products += p as usize;
        counterexamples.extend(cx);
    }
    Ok(SuiteReport::new::<F>(
        "minor-transition",
        ctx,
        seed,
        samples,
        json!({ "single_minors": samples - products, "products": products }),
        counterexamples,
    ))
}

/// Row contractions of `A` against `z = x^r` at frames tangent to random
/// hypersurfaces. Unfixed instances use `N ∈ {2,3}`, `δ = 2`, `ε = 1`,
/// `r ∈ {1,2}`.
pub fn psi_in_y<F: Scalar>(
    ctx: &F::Ctx,
    inst: Option<Instance>,
    samples: usize,
    seed: u64,
    height: u64,
) -> Result<SuiteReport, VerifyError> {
    let results: Vec<Result<Option<Value>, VerifyError>> = (0..samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = stream_rng(seed, &[s as u64]);
            let inst = match inst {
                Some(i) => i,
                None => {
                    let n = rng.gen_range(2..=3);
                    let k = rng.gen_range(1..n);
                    let r = rng.gen_range(1..=2);
                    Instance::new(n, k, 2, 1, r)?
                }
            };
            let (a, frame) = tangent_frame::<F, _>(ctx, &inst, &mut rng, height)?;
            let verdict = verify_psi_in_y(&inst, &a, &frame)?;
            Ok((!verdict.all_zero).then(|| {
                json!({
                    "sample": s,
                    "instance": inst,
                    "frame": frame.dump(),
                    "contractions": strings(&verdict.contractions),
                })
            }))
        })
        .collect();
    let counterexamples = results
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(SuiteReport::new::<F>(
        "psi-in-Y",
        ctx,
        seed,
        samples,
        json!({}),
        counterexamples,
    ))
}

/// Condition `(*)` on `points` parameter points (zero or random). With a
/// label only that stratum is sampled, otherwise every `M_I`, `|I| < N`, gets
/// `frames` frames spread over its admissible `I′`.
#[allow(clippy::too_many_arguments)]
pub fn star<F: Scalar>(
    ctx: &F::Ctx,
    inst: &Instance,
    points: usize,
    frames: usize,
    zero_params: bool,
    label: Option<&StratumLabel>,
    seed: u64,
    height: u64,
) -> Result<SuiteReport, VerifyError> {
    let mut counterexamples = Vec::new();
    let mut strata = Vec::new();
    let mut cases = 0;
    for p in 0..points {
        let a = if zero_params {
            ParameterPoint::<F>::zero(ctx, inst)
        } else {
            ParameterPoint::random(ctx, inst, &mut stream_rng(seed, &[p as u64, 0]), height)
        };
        let sub = derive_seed(seed, &[p as u64, 1]);
        let reports: Vec<StarReport> = match label {
            Some(l) => vec![check_star(ctx, inst, &a, l, frames, sub, height)?],
            None => check_star_stratified(ctx, inst, &a, frames, sub, height)?,
        };
        for r in reports {
            cases += r.samples;
            strata.push(json!({
                "point": p,
                "I": r.i_set,
                "Iprime": r.i_prime,
                "samples": r.samples,
                "full_rank": r.full_rank,
            }));
            for mut c in r.counterexamples {
                c["point"] = json!(p);
                c["I"] = json!(r.i_set);
                c["Iprime"] = json!(r.i_prime);
                counterexamples.push(c);
            }
        }
    }
    Ok(SuiteReport::new::<F>(
        "star",
        ctx,
        seed,
        cases,
        json!({
            "instance": inst,
            "points": points,
            "zero_params": zero_params,
            "strata": strata,
        }),
        counterexamples,
    ))
}

/// Parameter counts of the `Σ(I, I′)` samplers against `k₀ + k(k₁ − k)`,
/// exact membership of one sampled frame per stratum, and (for `δ ≥ k+1`)
/// the open-set inequalities up to `k₀, k₁ ≤ N`.
pub fn dims<F: Scalar>(
    ctx: &F::Ctx,
    inst: &Instance,
    seed: u64,
    height: u64,
) -> Result<SuiteReport, VerifyError> {
    let mut rows = Vec::new();
    let mut counterexamples = Vec::new();
    for (si, i_set) in StratumLabel::all_i_sets(inst.n).into_iter().enumerate() {
        for (pi, ip) in StratumLabel::admissible_i_primes(inst.n, inst.k, &i_set)
            .into_iter()
            .enumerate()
        {
            let label = StratumLabel::new(inst.n, i_set.clone(), Some(ip.clone()))?;
            let d = sigma_dims(inst, &label)?;
            let k0 = label.k0();
            let k1 = label.k1().expect("label has I'");
            let expected = k0 + inst.k * (k1 - inst.k);
            let mut rng = stream_rng(seed, &[si as u64, pi as u64]);
            let frame: FlagFrame<F> = sample_sigma(ctx, inst, &label, &mut rng, height)?;
            let member = label.contains_frame(&frame);
            if d.total != expected || !member {
                counterexamples.push(json!({
                    "I": i_set,
                    "Iprime": ip,
                    "sampler": d,
                    "expected": expected,
                    "member": member,
                    "frame": frame.dump(),
                }));
            }
            rows.push(json!({
                "I": i_set,
                "Iprime": ip,
                "k0": k0,
                "k1": k1,
                "dim": d.total,
                "expected": expected,
            }));
        }
    }
    let cases = rows.len();
    let audit = if inst.delta > inst.k {
        let audit = audit_open_set_inequalities(inst.k, inst.delta, inst.n, inst.n);
        if !audit.passed() {
            counterexamples.push(json!({ "open_set_audit": audit }));
        }
        serde_json::to_value(&audit).expect("audit serializes")
    } else {
        Value::Null
    };
    Ok(SuiteReport::new::<F>(
        "dims",
        ctx,
        seed,
        cases,
        json!({ "instance": inst, "strata": rows, "open_set_audit": audit }),
        counterexamples,
    ))
}
