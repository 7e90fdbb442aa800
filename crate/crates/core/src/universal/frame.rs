//! Flag frames `(x; v₁, …, vₖ)` and the strata `M_I`, `Σ(I, I′)`.

use rand::seq::SliceRandom;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::poly::{Chart, Scalar};

use super::{Instance, UniversalError};

/// Number of redraws before a sampler gives up.
pub const MAX_RETRIES: usize = 64;

/// A point with tangent vectors, all written on one chart.
///
/// `x` has chart coordinate 1; each `vᵢ` lists the `N` affine coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagFrame<F: Scalar> {
    chart: Chart,
    x: Vec<F>,
    vs: Vec<Vec<F>>,
}

impl<F: Scalar> FlagFrame<F> {
    /// Normalizes `x` on `chart` and checks that the `vᵢ` are independent.
    pub fn new(chart: Chart, x: Vec<F>, vs: Vec<Vec<F>>) -> Result<Self, UniversalError> {
        let f = Self::unchecked(chart, x, vs)?;
        if F::rank_of(&f.vs) != f.vs.len() {
            return Err(UniversalError::DegenerateFrame(
                "tangent vectors are linearly dependent".into(),
            ));
        }
        Ok(f)
    }

    /// As [`FlagFrame::new`] without the independence check; used for the
    /// minor identities, which hold for arbitrary vectors.
    pub fn unchecked(chart: Chart, x: Vec<F>, vs: Vec<Vec<F>>) -> Result<Self, UniversalError> {
        let x = chart.normalize(&x)?;
        let n = x.len() - 1;
        if let Some(v) = vs.iter().find(|v| v.len() != n) {
            return Err(UniversalError::DegenerateFrame(format!(
                "tangent vector has {} coordinates, expected {n}",
                v.len()
            )));
        }
        Ok(FlagFrame { chart, x, vs })
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn x(&self) -> &[F] {
        &self.x
    }

    pub fn vs(&self) -> &[Vec<F>] {
        &self.vs
    }

    pub fn k(&self) -> usize {
        self.vs.len()
    }

    /// `vᵢ` (0-based) in homogeneous coordinates, with zero chart entry.
    pub fn lifted(&self, i: usize) -> Vec<F> {
        self.chart
            .lift(&self.vs[i], self.x.len())
            .expect("frame shape was validated")
    }

    /// The same geometric frame on another chart.
    pub fn transport(&self, to: Chart) -> Result<Self, UniversalError> {
        let vs = self
            .vs
            .iter()
            .map(|v| Chart::transport_tangent(self.chart, to, &self.x, v))
            .collect::<Result<Vec<_>, _>>()?;
        let x = to.normalize(&self.x)?;
        Ok(FlagFrame { chart: to, x, vs })
    }

    /// Keeps the first `l` vectors.
    pub fn truncated(&self, l: usize) -> Self {
        FlagFrame {
            chart: self.chart,
            x: self.x.clone(),
            vs: self.vs[..l.min(self.vs.len())].to_vec(),
        }
    }

    /// `dξᵢ(x, vⱼ)` on the frame's chart is the `i`-th lifted coordinate of `vⱼ`.
    pub fn coordinate_differential(&self, i: usize, j: usize) -> F {
        self.lifted(j)[i].clone()
    }

    /// `{i : x_i = 0}`.
    pub fn zero_set(&self) -> Vec<usize> {
        (0..self.x.len()).filter(|&i| self.x[i].is_zero()).collect()
    }

    /// Plain dump for reports: every scalar rendered with `Display`.
    pub fn dump(&self) -> serde_json::Value {
        serde_json::json!({
            "chart": self.chart.index(),
            "x": self.x.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "v": self
                .vs
                .iter()
                .map(|v| v.iter().map(|c| c.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

/// The pair `(I, I′)` labelling `M_I` and `Σ(I, I′)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StratumLabel {
    n: u32,
    i_set: Vec<usize>,
    i_prime: Option<Vec<usize>>,
}

impl StratumLabel {
    pub fn new(
        n: u32,
        i_set: Vec<usize>,
        i_prime: Option<Vec<usize>>,
    ) -> Result<Self, UniversalError> {
        let mut i_set = i_set;
        i_set.sort_unstable();
        i_set.dedup();
        if i_set.len() >= n as usize {
            return Err(UniversalError::UnsatisfiableLabel(format!(
                "|I| = {} must be < N = {n}",
                i_set.len()
            )));
        }
        if let Some(&bad) = i_set.iter().find(|&&i| i > n as usize) {
            return Err(UniversalError::UnsatisfiableLabel(format!(
                "index {bad} outside 0..={n}"
            )));
        }
        let i_prime = match i_prime {
            Some(mut ip) => {
                ip.sort_unstable();
                ip.dedup();
                if let Some(bad) = ip.iter().find(|i| !i_set.contains(i)) {
                    return Err(UniversalError::UnsatisfiableLabel(format!(
                        "I' must be a subset of I; {bad} is not in I"
                    )));
                }
                Some(ip)
            }
            None => None,
        };
        Ok(StratumLabel { n, i_set, i_prime })
    }

    pub fn i_set(&self) -> &[usize] {
        &self.i_set
    }

    pub fn i_prime(&self) -> Option<&[usize]> {
        self.i_prime.as_deref()
    }

    /// `k₀ = N − |I|`.
    pub fn k0(&self) -> u32 {
        self.n - self.i_set.len() as u32
    }

    /// `k₁ = N − |I′|`, when `I′` is present.
    pub fn k1(&self) -> Option<u32> {
        self.i_prime.as_ref().map(|ip| self.n - ip.len() as u32)
    }

    /// The chart used for frames on `M_I`: the smallest index outside `I`.
    pub fn chart(&self) -> Chart {
        let c = (0..=self.n as usize)
            .find(|i| !self.i_set.contains(i))
            .expect("|I| < N leaves free indices");
        Chart::new(c)
    }

    /// Does `x` lie on `M_I`, i.e. `x_i = 0 ⟺ i ∈ I`?
    pub fn contains_point<F: Scalar>(&self, x: &[F]) -> bool {
        (0..x.len()).all(|i| x[i].is_zero() == self.i_set.contains(&i))
    }

    /// Does the frame lie on `Σ(I, I′)`? For `i ∈ I`: `i ∈ I′` iff every
    /// `dξᵢ(x, vⱼ)` vanishes. Without `I′` only `x ∈ M_I` is checked.
    pub fn contains_frame<F: Scalar>(&self, frame: &FlagFrame<F>) -> bool {
        if !self.contains_point(frame.x()) {
            return false;
        }
        let Some(ip) = &self.i_prime else {
            return true;
        };
        let lifted: Vec<Vec<F>> = (0..frame.k()).map(|j| frame.lifted(j)).collect();
        self.i_set.iter().all(|i| {
            let all_zero = lifted.iter().all(|w| w[*i].is_zero());
            all_zero == ip.contains(i)
        })
    }

    /// Every `I ⊂ {0, …, N}` with `|I| < N`, by size then lexicographically.
    pub fn all_i_sets(n: u32) -> Vec<Vec<usize>> {
        let total = n as usize + 1;
        let mut out = Vec::new();
        for size in 0..n as usize {
            out.extend(combinations(total, size));
        }
        out
    }

    /// The admissible `I′ ⊆ I` for `k` vectors, i.e. `k₁ = N − |I′| ≥ k`.
    pub fn admissible_i_primes(n: u32, k: u32, i_set: &[usize]) -> Vec<Vec<usize>> {
        let max = (n - k) as usize;
        let mut out = Vec::new();
        for size in 0..=i_set.len().min(max) {
            for pick in combinations(i_set.len(), size) {
                out.push(pick.iter().map(|&p| i_set[p]).collect());
            }
        }
        out
    }
}

/// All `size`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if size > n {
        return out;
    }
    let mut c: Vec<usize> = (0..size).collect();
    loop {
        out.push(c.clone());
        let mut i = size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if c[i] < n - size + i {
                c[i] += 1;
                for j in i + 1..size {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Dimension bookkeeping of a sampler: `x` has `point_params` free
/// coordinates and the frame `frame_params` free entries modulo `GL_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SamplerDims {
    pub point_params: u32,
    pub frame_params: u32,
    pub gl_dim: u32,
    pub total: u32,
}

/// Free parameters of [`sample_sigma`]: `k₀ + k·k₁ − k² = k₀ + k(k₁ − k)`.
pub fn sigma_dims(inst: &Instance, label: &StratumLabel) -> Result<SamplerDims, UniversalError> {
    let k1 = label
        .k1()
        .ok_or_else(|| UniversalError::UnsatisfiableLabel("Σ(I, I') needs I'".into()))?;
    if k1 < inst.k {
        return Err(UniversalError::UnsatisfiableLabel(format!(
            "k1 = {k1} < k = {}",
            inst.k
        )));
    }
    // x: nonzero coordinates outside I, minus the chart normalization
    let point_params = (inst.nvars() - label.i_set().len() - 1) as u32;
    // each v: affine coordinates outside I'
    let per_vector = inst.n - label.i_prime().map_or(0, |ip| ip.len()) as u32;
    let frame_params = inst.k * per_vector;
    let gl_dim = inst.k * inst.k;
    Ok(SamplerDims {
        point_params,
        frame_params,
        gl_dim,
        total: point_params + frame_params - gl_dim,
    })
}

fn sample_point<F: Scalar, R: RngCore + ?Sized>(
    ctx: &F::Ctx,
    label: &StratumLabel,
    nvars: usize,
    rng: &mut R,
    height: u64,
) -> Vec<F> {
    let chart = label.chart().index();
    (0..nvars)
        .map(|i| {
            if label.i_set().contains(&i) {
                F::zero(ctx)
            } else if i == chart {
                F::one(ctx)
            } else {
                F::random_nonzero(ctx, rng, height)
            }
        })
        .collect()
}

/// A frame with `x ∈ M_I` and `k` independent random tangent vectors.
pub fn sample_m_i<F: Scalar, R: RngCore + ?Sized>(
    ctx: &F::Ctx,
    inst: &Instance,
    label: &StratumLabel,
    rng: &mut R,
    height: u64,
) -> Result<FlagFrame<F>, UniversalError> {
    for _ in 0..MAX_RETRIES {
        let x = sample_point(ctx, label, inst.nvars(), rng, height);
        let vs: Vec<Vec<F>> = (0..inst.k)
            .map(|_| (0..inst.n).map(|_| F::random(ctx, rng, height)).collect())
            .collect();
        if let Ok(frame) = FlagFrame::new(label.chart(), x, vs) {
            if label.contains_point(frame.x()) {
                return Ok(frame);
            }
        }
    }
    Err(UniversalError::SamplingFailure(MAX_RETRIES))
}

/// A frame on `Σ(I, I′)`: `x ∈ M_I`, every `vⱼ` tangent to `D_i` for
/// `i ∈ I′`, and for each `i ∈ I ∖ I′` some `vⱼ` transverse to `D_i`.
/// Membership is re-verified exactly before returning.
pub fn sample_sigma<F: Scalar, R: RngCore + ?Sized>(
    ctx: &F::Ctx,
    inst: &Instance,
    label: &StratumLabel,
    rng: &mut R,
    height: u64,
) -> Result<FlagFrame<F>, UniversalError> {
    sigma_dims(inst, label)?;
    let chart = label.chart();
    let ip = label.i_prime().expect("checked by sigma_dims").to_vec();
    // affine slot of homogeneous index i on the chart
    let slot = |i: usize| if i < chart.index() { i } else { i - 1 };
    let forced_zero: Vec<usize> = ip.iter().map(|&i| slot(i)).collect();
    for _ in 0..MAX_RETRIES {
        let x = sample_point(ctx, label, inst.nvars(), rng, height);
        let vs: Vec<Vec<F>> = (0..inst.k)
            .map(|_| {
                (0..inst.n as usize)
                    .map(|s| {
                        if forced_zero.contains(&s) {
                            F::zero(ctx)
                        } else {
                            F::random(ctx, rng, height)
                        }
                    })
                    .collect()
            })
            .collect();
        if let Ok(frame) = FlagFrame::new(chart, x, vs) {
            if label.contains_frame(&frame) {
                return Ok(frame);
            }
        }
    }
    Err(UniversalError::SamplingFailure(MAX_RETRIES))
}

/// A random `I` of the given size, for grid sweeps.
pub fn random_subset<R: RngCore + ?Sized>(n_total: usize, size: usize, rng: &mut R) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n_total).collect();
    all.shuffle(rng);
    let mut pick = all[..size].to_vec();
    pick.sort_unstable();
    pick
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::scalar::Rational;
    use crate::rng::stream_rng;

    #[test]
    fn label_validation() {
        assert!(StratumLabel::new(3, vec![0, 1, 2], None).is_err());
        assert!(StratumLabel::new(3, vec![0, 1], Some(vec![2])).is_err());
        let l = StratumLabel::new(3, vec![2, 0], Some(vec![0])).unwrap();
        assert_eq!(l.i_set(), &[0, 2]);
        assert_eq!((l.k0(), l.k1()), (1, Some(2)));
        assert_eq!(l.chart(), Chart::new(1));
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
        assert_eq!(StratumLabel::all_i_sets(3).len(), 1 + 4 + 6);
        assert_eq!(
            StratumLabel::admissible_i_primes(4, 2, &[0, 1, 3]).len(),
            1 + 3 + 3
        );
    }

    #[test]
    fn sigma_frames_satisfy_the_biconditional() {
        let inst = Instance::new(4, 2, 3, 1, 1).unwrap();
        let mut rng = stream_rng(3, &[]);
        for i_set in StratumLabel::all_i_sets(4) {
            for ip in StratumLabel::admissible_i_primes(4, 2, &i_set) {
                let label = StratumLabel::new(4, i_set.clone(), Some(ip.clone())).unwrap();
                let f: FlagFrame<Rational> =
                    sample_sigma(&(), &inst, &label, &mut rng, 100).unwrap();
                assert!(label.contains_frame(&f));
                assert_eq!(f.zero_set(), i_set);
                let dims = sigma_dims(&inst, &label).unwrap();
                assert_eq!(
                    dims.total,
                    label.k0() + inst.k * (label.k1().unwrap() - inst.k)
                );
            }
        }
    }

    #[test]
    fn transport_preserves_stratum() {
        let inst = Instance::new(3, 2, 2, 1, 1).unwrap();
        let label = StratumLabel::new(3, vec![1], Some(vec![])).unwrap();
        let mut rng = stream_rng(5, &[]);
        let f: FlagFrame<Rational> = sample_sigma(&(), &inst, &label, &mut rng, 100).unwrap();
        let g = f.transport(Chart::new(3)).unwrap();
        assert!(label.contains_frame(&g));
        assert_eq!(g.transport(f.chart()).unwrap(), f);
    }
}
