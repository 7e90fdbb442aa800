//! The matrix `A(a; (x; v₁, …, vₖ))` and the maximal-rank condition `(*, I)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::linalg::Matrix;
use crate::poly::homog::contract;
use crate::poly::{HomogPoly, MultiIndex, Scalar};
use crate::rng::stream_rng;

use super::frame::{sample_m_i, sample_sigma, FlagFrame, StratumLabel};
use super::instance::{monomial_derivative, monomial_value, Instance, ParameterPoint};
use super::UniversalError;

/// Values on the frame's chart that every entry of `A` is built from.
struct FrameData<F: Scalar> {
    x: Vec<F>,
    lifted: Vec<Vec<F>>,
    r_plus_one: F,
}

impl<F: Scalar> FrameData<F> {
    fn new(inst: &Instance, frame: &FlagFrame<F>) -> Self {
        let ctx = frame.x()[0].ctx();
        FrameData {
            x: frame.x().to_vec(),
            lifted: (0..frame.k()).map(|i| frame.lifted(i)).collect(),
            r_plus_one: F::from_i64(&ctx, inst.r as i64 + 1),
        }
    }

    /// `(α_J, θ_J(v₁), …, θ_J(vₖ))` for one column.
    fn column(&self, j: &MultiIndex, aj: &HomogPoly<F>) -> Result<Vec<F>, UniversalError> {
        let ctx = self.x[0].ctx();
        if aj.is_zero() {
            return Ok(vec![F::zero(&ctx); self.lifted.len() + 1]);
        }
        let xi_j = monomial_value(j, &self.x);
        let a_x = aj.eval(&self.x)?;
        let grad = aj.gradient(&self.x)?;
        let mut col = Vec::with_capacity(self.lifted.len() + 1);
        col.push(a_x.mul(&xi_j));
        for w in &self.lifted {
            let da = contract(&grad, w, &ctx);
            let dxi = monomial_derivative(j, &self.x, w);
            col.push(xi_j.mul(&da).add(&self.r_plus_one.mul(&a_x).mul(&dxi)));
        }
        Ok(col)
    }
}

/// `θ_J(a, x, vᵢ) = ξ^J(x) da_J(x, vᵢ) + (r+1) a_J(x) dξ^J(x, vᵢ)` on the
/// frame's chart; `i` is 1-based.
pub fn theta<F: Scalar>(
    inst: &Instance,
    a: &ParameterPoint<F>,
    j: &MultiIndex,
    frame: &FlagFrame<F>,
    i: usize,
) -> Result<F, UniversalError> {
    if i == 0 || i > frame.k() {
        return Err(UniversalError::IndexMismatch(format!(
            "row {i} outside 1..={}",
            frame.k()
        )));
    }
    let aj = a
        .get(j)
        .ok_or_else(|| UniversalError::IndexMismatch(format!("no column {j}")))?;
    let data = FrameData::new(inst, &frame.truncated(i));
    Ok(data.column(j, aj)?.pop().expect("row i present"))
}

/// `A(a; (x; v₁, …, vₖ))`: row 0 holds `α_J`, row `i` holds `θ_J(vᵢ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankMatrix<F: Scalar> {
    matrix: Matrix<F>,
    columns: Vec<MultiIndex>,
}

impl<F: Scalar> RankMatrix<F> {
    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    pub fn columns(&self) -> &[MultiIndex] {
        &self.columns
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// Condition `(*)` at this frame.
    pub fn has_full_rank(&self) -> bool {
        self.rank() == self.rows()
    }

    pub fn column_position(&self, j: &MultiIndex) -> Option<usize> {
        self.columns.binary_search_by(|c| j.cmp(c)).ok()
    }
}

/// Builds `A` on the frame's chart. The frame may carry at most `k` vectors;
/// fewer vectors give the top rows only.
pub fn build_a<F: Scalar>(
    inst: &Instance,
    a: &ParameterPoint<F>,
    frame: &FlagFrame<F>,
) -> Result<RankMatrix<F>, UniversalError> {
    if frame.k() > inst.k as usize || frame.x().len() != inst.nvars() {
        return Err(UniversalError::DegenerateFrame(format!(
            "frame with {} vectors in {} coordinates does not fit the instance",
            frame.k(),
            frame.x().len()
        )));
    }
    if a.len() != inst.num_columns() {
        return Err(UniversalError::IndexMismatch(
            "parameter point does not match the instance".into(),
        ));
    }
    let data = FrameData::new(inst, frame);
    let cols: Vec<Vec<F>> = a
        .columns()
        .iter()
        .zip(a.coeffs())
        .map(|(j, aj)| data.column(j, aj))
        .collect::<Result<_, _>>()?;
    let nrows = frame.k() + 1;
    let rows: Vec<Vec<F>> = (0..nrows)
        .map(|r| cols.iter().map(|c| c[r].clone()).collect())
        .collect();
    Ok(RankMatrix {
        matrix: Matrix::from_rows(rows),
        columns: a.columns().to_vec(),
    })
}

/// Outcome of sampling condition `(*, I)`; serializes to the report layout.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StarReport {
    pub condition: &'static str,
    #[serde(rename = "I")]
    pub i_set: Vec<usize>,
    #[serde(rename = "Iprime")]
    pub i_prime: Vec<usize>,
    pub samples: usize,
    pub full_rank: usize,
    pub counterexamples: Vec<serde_json::Value>,
    pub seed: u64,
    pub field: &'static str,
}

impl StarReport {
    /// "No counterexample in `samples` samples": evidence, not proof.
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Samples `samples` frames on `M_I` (or on `Σ(I, I′)` when the label has
/// `I′`) and records every frame where `A` drops rank. Sample `s` uses the
/// stream `(seed, s)`, so the report does not depend on thread scheduling.
pub fn check_star<F: Scalar>(
    ctx: &F::Ctx,
    inst: &Instance,
    a: &ParameterPoint<F>,
    label: &StratumLabel,
    samples: usize,
    seed: u64,
    height: u64,
) -> Result<StarReport, UniversalError> {
    let outcomes: Vec<Result<Option<serde_json::Value>, UniversalError>> = (0..samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = stream_rng(seed, &[s as u64]);
            let frame = match label.i_prime() {
                Some(_) => sample_sigma(ctx, inst, label, &mut rng, height)?,
                None => sample_m_i(ctx, inst, label, &mut rng, height)?,
            };
            let m = build_a(inst, a, &frame)?;
            let rank = m.rank();
            if rank == m.rows() {
                Ok(None)
            } else {
                let mut dump = frame.dump();
                dump["sample"] = serde_json::json!(s);
                dump["rank"] = serde_json::json!(rank);
                Ok(Some(dump))
            }
        })
        .collect();
    let mut counterexamples = Vec::new();
    for o in outcomes {
        if let Some(c) = o? {
            counterexamples.push(c);
        }
    }
    Ok(StarReport {
        condition: "star",
        i_set: label.i_set().to_vec(),
        i_prime: label.i_prime().map(|s| s.to_vec()).unwrap_or_default(),
        samples,
        full_rank: samples - counterexamples.len(),
        counterexamples,
        seed,
        field: F::field_label(ctx),
    })
}

/// `frames_per_stratum` frames on every stratum `M_I`, `|I| < N`, with `I′`
/// cycling through the admissible subsets of `I` (frame `f` uses the
/// `f mod (#I′)`-th one). One report per `(I, I′)`.
pub fn check_star_stratified<F: Scalar>(
    ctx: &F::Ctx,
    inst: &Instance,
    a: &ParameterPoint<F>,
    frames_per_stratum: usize,
    seed: u64,
    height: u64,
) -> Result<Vec<StarReport>, UniversalError> {
    let mut reports = Vec::new();
    for (si, i_set) in StratumLabel::all_i_sets(inst.n).into_iter().enumerate() {
        let primes = StratumLabel::admissible_i_primes(inst.n, inst.k, &i_set);
        for (pi, ip) in primes.iter().enumerate() {
            let count = (0..frames_per_stratum)
                .filter(|f| f % primes.len() == pi)
                .count();
            if count == 0 {
                continue;
            }
            let label = StratumLabel::new(inst.n, i_set.clone(), Some(ip.clone()))?;
            let sub_seed = crate::rng::derive_seed(seed, &[si as u64, pi as u64]);
            let mut report = check_star(ctx, inst, a, &label, count, sub_seed, height)?;
            report.seed = seed;
            reports.push(report);
        }
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::scalar::{parse_rational, Rational};
    use crate::poly::{Chart, HomogPoly};

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn theta_examples() {
        let inst = Instance::new(2, 1, 1, 1, 1).unwrap();
        let mut a = ParameterPoint::<Rational>::zero(&(), &inst);
        let frame = FlagFrame::new(
            Chart::new(0),
            vec![q("1"), q("3"), q("5")],
            vec![vec![q("1"), q("0")]],
        )
        .unwrap();
        let j = MultiIndex::new(vec![0, 1, 0]);
        assert_eq!(theta(&inst, &a, &j, &frame, 1).unwrap(), q("0"));
        a.set(&j, HomogPoly::variable(&(), 3, 1)).unwrap();
        assert_eq!(theta(&inst, &a, &j, &frame, 1).unwrap(), q("9"));
        let j0 = MultiIndex::new(vec![1, 0, 0]);
        a.set(&j0, HomogPoly::variable(&(), 3, 0)).unwrap();
        assert_eq!(theta(&inst, &a, &j0, &frame, 1).unwrap(), q("0"));
        assert!(theta(&inst, &a, &j0, &frame, 2).is_err());
    }

    #[test]
    fn zero_parameters_give_zero_matrix() {
        let inst = Instance::new(3, 1, 1, 1, 1).unwrap();
        let a = ParameterPoint::<Rational>::zero(&(), &inst);
        let label = StratumLabel::new(3, vec![], None).unwrap();
        let mut rng = stream_rng(1, &[]);
        let f = sample_m_i(&(), &inst, &label, &mut rng, 100).unwrap();
        let m = build_a(&inst, &a, &f).unwrap();
        assert!(m.matrix().is_zero());
        assert_eq!(m.rank(), 0);
        let report = check_star(&(), &inst, &a, &label, 3, 9, 100).unwrap();
        assert_eq!(report.full_rank, 0);
        assert_eq!(report.counterexamples[0]["sample"], 0);
    }

    #[test]
    fn random_parameters_have_full_rank() {
        let inst = Instance::new(3, 2, 3, 1, 1).unwrap();
        let mut rng = stream_rng(11, &[]);
        let a = ParameterPoint::<Rational>::random(&(), &inst, &mut rng, 100);
        let label = StratumLabel::new(3, vec![0], None).unwrap();
        let r1 = check_star(&(), &inst, &a, &label, 10, 4, 100).unwrap();
        let r2 = check_star(&(), &inst, &a, &label, 10, 4, 100).unwrap();
        assert!(r1.passed());
        assert_eq!(
            serde_json::to_string(&r1).unwrap(),
            serde_json::to_string(&r2).unwrap()
        );
    }

    #[test]
    fn rank_is_chart_independent() {
        let inst = Instance::new(3, 2, 2, 1, 1).unwrap();
        let mut rng = stream_rng(2, &[]);
        let a = ParameterPoint::<Rational>::random(&(), &inst, &mut rng, 100);
        let label = StratumLabel::new(3, vec![], None).unwrap();
        let f = sample_m_i(&(), &inst, &label, &mut rng, 100).unwrap();
        let g = f.transport(Chart::new(2)).unwrap();
        assert_eq!(
            build_a(&inst, &a, &f).unwrap().rank(),
            build_a(&inst, &a, &g).unwrap().rank()
        );
    }
}
