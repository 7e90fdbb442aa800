//! Affine charts `V_c = {ξ_c ≠ 0}` of projective space.

use serde::{Deserialize, Serialize};

use super::scalar::Scalar;
use super::PolyError;

/// The chart `V_c`. Affine coordinates are `ξ_j / ξ_c` for `j ≠ c`, in
/// increasing order of `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Chart(usize);

impl Chart {
    pub fn new(index: usize) -> Self {
        Chart(index)
    }

    pub fn index(self) -> usize {
        self.0
    }

    fn check(self, nvars: usize) -> Result<(), PolyError> {
        if self.0 >= nvars {
            return Err(PolyError::ChartOutOfRange {
                chart: self.0,
                nvars,
            });
        }
        Ok(())
    }

    /// The first chart on which `x` is finite.
    pub fn containing<F: Scalar>(x: &[F]) -> Option<Chart> {
        x.iter().position(|v| !v.is_zero()).map(Chart)
    }

    /// `x / x_c`, the representative with chart coordinate 1.
    pub fn normalize<F: Scalar>(self, x: &[F]) -> Result<Vec<F>, PolyError> {
        self.check(x.len())?;
        let xc = &x[self.0];
        if xc.is_zero() {
            return Err(PolyError::OnHyperplaneAtInfinity { chart: self.0 });
        }
        let inv = xc.inv()?;
        Ok(x.iter().map(|v| v.mul(&inv)).collect())
    }

    /// Affine coordinates of `x` on this chart.
    pub fn affine<F: Scalar>(self, x: &[F]) -> Result<Vec<F>, PolyError> {
        let u = self.normalize(x)?;
        Ok(self.drop_chart_coordinate(&u))
    }

    fn drop_chart_coordinate<F: Scalar>(self, w: &[F]) -> Vec<F> {
        w.iter()
            .enumerate()
            .filter(|(j, _)| *j != self.0)
            .map(|(_, v)| v.clone())
            .collect()
    }

    /// Inserts a zero at the chart position: a tangent vector in affine
    /// coordinates becomes a vector in `𝐤^{N+1}` with vanishing `c`-entry.
    pub fn lift<F: Scalar>(self, v: &[F], nvars: usize) -> Result<Vec<F>, PolyError> {
        self.check(nvars)?;
        if v.len() + 1 != nvars {
            return Err(PolyError::VariableCount {
                expected: nvars - 1,
                got: v.len(),
            });
        }
        let ctx = match v.first() {
            Some(e) => e.ctx(),
            None => {
                return Err(PolyError::VariableCount {
                    expected: 1,
                    got: 0,
                })
            }
        };
        let mut out = Vec::with_capacity(nvars);
        out.extend_from_slice(&v[..self.0]);
        out.push(F::zero(&ctx));
        out.extend_from_slice(&v[self.0..]);
        Ok(out)
    }

    /// `g = (x_to / x_from)^d`, so that `P_from(x) = g · P_to(x)` for every
    /// degree-`d` form `P`.
    pub fn transition_factor<F: Scalar>(
        d: u32,
        from: Chart,
        to: Chart,
        x: &[F],
    ) -> Result<F, PolyError> {
        from.check(x.len())?;
        to.check(x.len())?;
        for c in [from, to] {
            if x[c.0].is_zero() {
                return Err(PolyError::OnHyperplaneAtInfinity { chart: c.0 });
            }
        }
        Ok(x[to.0].div(&x[from.0])?.pow(d as u64))
    }

    /// Pushes a tangent vector at `x` from chart `from` to chart `to` through
    /// the Jacobian of the transition map `Y_j = X_j / X_to`.
    pub fn transport_tangent<F: Scalar>(
        from: Chart,
        to: Chart,
        x: &[F],
        v: &[F],
    ) -> Result<Vec<F>, PolyError> {
        let xs = from.normalize(x)?;
        let w = from.lift(v, x.len())?;
        to.check(x.len())?;
        let xt = &xs[to.0];
        if xt.is_zero() {
            return Err(PolyError::OnHyperplaneAtInfinity { chart: to.0 });
        }
        let inv2 = xt.mul(xt).inv()?;
        let wt = &w[to.0];
        let pushed: Vec<F> = xs
            .iter()
            .zip(&w)
            .map(|(xj, wj)| wj.mul(xt).sub(&xj.mul(wt)).mul(&inv2))
            .collect();
        Ok(to.drop_chart_coordinate(&pushed))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::scalar::{parse_rational, Rational};

    fn pt(xs: &[&str]) -> Vec<Rational> {
        xs.iter().map(|s| parse_rational(s).unwrap()).collect()
    }

    #[test]
    fn transition_factor_examples() {
        let x = pt(&["1", "2", "5"]);
        let one = pt(&["1"])[0].clone();
        assert_eq!(
            Chart::transition_factor(3, Chart::new(1), Chart::new(1), &x).unwrap(),
            one
        );
        assert_eq!(
            Chart::transition_factor(0, Chart::new(0), Chart::new(2), &x).unwrap(),
            one
        );
        assert_eq!(
            Chart::transition_factor(2, Chart::new(0), Chart::new(1), &x).unwrap(),
            pt(&["4"])[0]
        );
        assert!(
            Chart::transition_factor(1, Chart::new(0), Chart::new(1), &pt(&["1", "0"])).is_err()
        );
    }

    #[test]
    fn lift_and_affine() {
        let c = Chart::new(1);
        assert_eq!(c.lift(&pt(&["3", "4"]), 3).unwrap(), pt(&["3", "0", "4"]));
        assert_eq!(c.affine(&pt(&["2", "2", "6"])).unwrap(), pt(&["1", "3"]));
        assert!(c.lift(&pt(&["3"]), 3).is_err());
    }

    #[test]
    fn transport_round_trips() {
        let x = pt(&["2", "3", "-5"]);
        let v = pt(&["1/2", "7"]);
        let there = Chart::transport_tangent(Chart::new(0), Chart::new(2), &x, &v).unwrap();
        let back = Chart::transport_tangent(Chart::new(2), Chart::new(0), &x, &there).unwrap();
        assert_eq!(back, v);
        let same = Chart::transport_tangent(Chart::new(1), Chart::new(1), &x, &v).unwrap();
        assert_eq!(same, v);
    }
}
