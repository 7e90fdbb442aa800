//! Chart transition laws for determinants of sections and for minors of `A`.

use serde::Serialize;

use crate::linalg::Matrix;
use crate::partition::Partition;
use crate::poly::{Chart, HomogPoly, Scalar};
use crate::universal::{build_a, FlagFrame, Instance, ParameterPoint};

use super::{minor_at, PluckerError};

/// `B_V(x; v₁, …, v_{l−1})`: row 0 holds `(ω_j)_V(x)`, row `i` holds
/// `d(ω_j)_V(x, vᵢ)`, all on the chart `V`.
pub fn section_matrix<F: Scalar>(
    sections: &[HomogPoly<F>],
    chart: Chart,
    x: &[F],
    vs: &[Vec<F>],
) -> Result<Matrix<F>, PluckerError> {
    if vs.len() + 1 != sections.len() {
        return Err(PluckerError::InvalidSections(format!(
            "{} sections need {} vectors, got {}",
            sections.len(),
            sections.len().saturating_sub(1),
            vs.len()
        )));
    }
    let mut rows = Vec::with_capacity(sections.len());
    rows.push(
        sections
            .iter()
            .map(|w| w.eval_on_chart(chart, x))
            .collect::<Result<Vec<_>, _>>()?,
    );
    for v in vs {
        rows.push(
            sections
                .iter()
                .map(|w| w.dir_derivative(chart, x, v))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    Ok(Matrix::from_rows(rows))
}

/// Both sides of `det B_V = g^l det B_{V′}`, with `g = (x_{V′}/x_V)^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleVerdict<F: Scalar> {
    pub det_v: F,
    pub det_v_prime: F,
    /// `g^l`.
    pub factor: F,
    pub holds: bool,
}

/// Checks the gluing identity for `l` sections of common degree `d`; the
/// `l − 1` vectors are given on `V` and transported to `V′`.
pub fn cocycle_check<F: Scalar>(
    sections: &[HomogPoly<F>],
    v: Chart,
    v_prime: Chart,
    x: &[F],
    vs: &[Vec<F>],
) -> Result<CocycleVerdict<F>, PluckerError> {
    let first = sections
        .first()
        .ok_or_else(|| PluckerError::InvalidSections("no sections".into()))?;
    let d = first.degree();
    if sections
        .iter()
        .any(|s| s.degree() != d || s.nvars() != first.nvars())
    {
        return Err(PluckerError::InvalidSections(
            "sections must share degree and variables".into(),
        ));
    }
    let moved = vs
        .iter()
        .map(|w| Chart::transport_tangent(v, v_prime, x, w))
        .collect::<Result<Vec<_>, _>>()?;
    let det_v = section_matrix(sections, v, x, vs)?.det();
    let det_v_prime = section_matrix(sections, v_prime, x, &moved)?.det();
    let factor = Chart::transition_factor(d, v, v_prime, x)?.pow(sections.len() as u64);
    let holds = det_v == factor.mul(&det_v_prime);
    Ok(CocycleVerdict {
        det_v,
        det_v_prime,
        factor,
        holds,
    })
}

/// `|λ*₊|·(ε + δ)`, the twist of `O_M` in the pullback of the line bundle
/// on the Plücker side.
pub fn pullback_degree(lambda: &Partition, eps: u32, delta: u32) -> u64 {
    lambda.ampleness_weight() * (eps as u64 + delta as u64)
}

/// Comparison of a product of minors of `A` on two charts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinorVerdict {
    /// Total twist exponent `Σ l·(ε+δ)` over the factors.
    pub exponent: u64,
    pub value_from: String,
    pub value_to: String,
    pub factor: String,
    pub holds: bool,
}

/// A product of minors of `A` (columns by position, each minor on the first
/// `l` rows) computed on the frame's chart and on `to` after transporting
/// the frame; the ratio must be `(x_to/x_from)^{Σ l(ε+δ)}`.
pub fn product_transition_check<F: Scalar>(
    inst: &Instance,
    a: &ParameterPoint<F>,
    frame: &FlagFrame<F>,
    selectors: &[Vec<usize>],
    to: Chart,
) -> Result<MinorVerdict, PluckerError> {
    let ncols = inst.num_columns();
    for sel in selectors {
        if sel.is_empty() || sel.len() > frame.k() + 1 {
            return Err(PluckerError::InvalidSelector(format!(
                "minor of size {} with {} tangent vectors",
                sel.len(),
                frame.k()
            )));
        }
        if let Some(&bad) = sel.iter().find(|&&c| c >= ncols) {
            return Err(PluckerError::InvalidSelector(format!(
                "column {bad} out of range"
            )));
        }
        for (i, c) in sel.iter().enumerate() {
            if sel[..i].contains(c) {
                return Err(PluckerError::RepeatedColumn(c.to_string()));
            }
        }
    }
    let moved = frame.transport(to)?;
    let m_from = build_a(inst, a, frame)?;
    let m_to = build_a(inst, a, &moved)?;
    let ctx = frame.x()[0].ctx();
    let prod = |m: &Matrix<F>| {
        selectors
            .iter()
            .fold(F::one(&ctx), |acc, s| acc.mul(&minor_at(m, s)))
    };
    let value_from = prod(m_from.matrix());
    let value_to = prod(m_to.matrix());
    let exponent: u64 = selectors
        .iter()
        .map(|s| s.len() as u64 * (inst.eps as u64 + inst.delta as u64))
        .sum();
    let exponent_u32 = u32::try_from(exponent)
        .map_err(|_| PluckerError::InvalidSelector("twist exponent overflows".into()))?;
    let factor = Chart::transition_factor(exponent_u32, frame.chart(), to, frame.x())?;
    let holds = value_from == factor.mul(&value_to);
    Ok(MinorVerdict {
        exponent,
        value_from: value_from.to_string(),
        value_to: value_to.to_string(),
        factor: factor.to_string(),
        holds,
    })
}

/// The single-minor case: size `l = columns.len()`, twist `l(ε+δ)`.
pub fn minor_transition_check<F: Scalar>(
    inst: &Instance,
    a: &ParameterPoint<F>,
    frame: &FlagFrame<F>,
    columns: &[usize],
    to: Chart,
) -> Result<MinorVerdict, PluckerError> {
    product_transition_check(inst, a, frame, &[columns.to_vec()], to)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::scalar::{parse_rational, Rational};
    use crate::rng::stream_rng;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn pullback_degree_examples() {
        let l11 = Partition::new(vec![1, 1]).unwrap();
        assert_eq!(pullback_degree(&l11, 1, 11), 36);
        let l1 = Partition::new(vec![1]).unwrap();
        assert_eq!(pullback_degree(&l1, 2, 5), 14);
    }

    #[test]
    fn single_section_ratio_is_g() {
        let mut rng = stream_rng(1, &[]);
        let w = HomogPoly::<Rational>::random(&(), 3, 4, &mut rng, 50);
        let x = vec![q("2"), q("-3"), q("5")];
        let v = cocycle_check(
            std::slice::from_ref(&w),
            Chart::new(0),
            Chart::new(2),
            &x,
            &[],
        )
        .unwrap();
        assert!(v.holds);
        assert_eq!(v.factor, q("625/16"));
        let same = cocycle_check(&[w], Chart::new(1), Chart::new(1), &x, &[]).unwrap();
        assert_eq!(same.det_v, same.det_v_prime);
    }

    #[test]
    fn cocycle_holds_for_three_sections() {
        let mut rng = stream_rng(2, &[]);
        let ws: Vec<_> = (0..3)
            .map(|_| HomogPoly::<Rational>::random(&(), 3, 3, &mut rng, 50))
            .collect();
        let x = vec![q("1/2"), q("3"), q("-7")];
        let vs = vec![vec![q("1"), q("2")], vec![q("-1/3"), q("4")]];
        let v = cocycle_check(&ws, Chart::new(0), Chart::new(1), &x, &vs).unwrap();
        assert!(v.holds);
        assert!(!v.det_v.is_zero());
    }
}
