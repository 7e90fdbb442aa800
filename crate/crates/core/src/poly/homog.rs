//! Sparse homogeneous polynomials in `N + 1` variables.

use std::collections::BTreeMap;
use std::fmt;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::chart::Chart;
use super::multi_index::{multi_indices, MultiIndex};
use super::scalar::{parse_rational, rational_parts, Rational, Scalar};
use super::PolyError;

/// A homogeneous polynomial `Σ_J c_J ξ^J` of fixed degree.
///
/// Every stored key has length `degree`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogPoly<F: Scalar> {
    nvars: usize,
    degree: u32,
    ctx: F::Ctx,
    terms: BTreeMap<MultiIndex, F>,
}

impl<F: Scalar> HomogPoly<F> {
    pub fn zero(ctx: &F::Ctx, nvars: usize, degree: u32) -> Self {
        HomogPoly {
            nvars,
            degree,
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// `coeff · ξ^J`.
    pub fn monomial(ctx: &F::Ctx, exponent: MultiIndex, coeff: F) -> Self {
        let mut p = Self::zero(ctx, exponent.nvars(), exponent.length());
        if !coeff.is_zero() {
            p.terms.insert(exponent, coeff);
        }
        p
    }

    /// `ξ^J` with unit coefficient.
    pub fn xi_power(ctx: &F::Ctx, exponent: MultiIndex) -> Self {
        Self::monomial(ctx, exponent, F::one(ctx))
    }

    /// The coordinate `ξᵢ`.
    pub fn variable(ctx: &F::Ctx, nvars: usize, i: usize) -> Self {
        Self::xi_power(ctx, MultiIndex::unit(nvars, i, 1))
    }

    pub fn from_terms<I>(
        ctx: &F::Ctx,
        nvars: usize,
        degree: u32,
        terms: I,
    ) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (MultiIndex, F)>,
    {
        let mut p = Self::zero(ctx, nvars, degree);
        for (j, c) in terms {
            if j.nvars() != nvars {
                return Err(PolyError::VariableCount {
                    expected: nvars,
                    got: j.nvars(),
                });
            }
            if j.length() != degree {
                return Err(PolyError::DegreeMismatch {
                    expected: degree,
                    got: j.length(),
                });
            }
            p.add_term(j, c);
        }
        Ok(p)
    }

    /// A polynomial with independent random coefficients on every monomial.
    pub fn random<R: RngCore + ?Sized>(
        ctx: &F::Ctx,
        nvars: usize,
        degree: u32,
        rng: &mut R,
        height: u64,
    ) -> Self {
        let mut p = Self::zero(ctx, nvars, degree);
        for j in multi_indices(nvars, degree) {
            let c = F::random(ctx, rng, height);
            p.add_term(j, c);
        }
        p
    }

    fn add_term(&mut self, j: MultiIndex, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&j) {
            Some(existing) => {
                let s = existing.add(&c);
                if s.is_zero() {
                    self.terms.remove(&j);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(j, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical (decreasing graded-lex) order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &F)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, j: &MultiIndex) -> F {
        self.terms
            .get(j)
            .cloned()
            .unwrap_or_else(|| F::zero(&self.ctx))
    }

    fn check_compatible(&self, other: &Self) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::VariableCount {
                expected: self.nvars,
                got: other.nvars,
            });
        }
        if self.degree != other.degree {
            return Err(PolyError::DegreeMismatch {
                expected: self.degree,
                got: other.degree,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (j, c) in &other.terms {
            out.add_term(j.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&F::one(&self.ctx).neg())
    }

    pub fn scale(&self, s: &F) -> Self {
        let mut out = Self::zero(&self.ctx, self.nvars, self.degree);
        if s.is_zero() {
            return out;
        }
        out.terms = self
            .terms
            .iter()
            .map(|(j, c)| (j.clone(), c.mul(s)))
            .collect();
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::VariableCount {
                expected: self.nvars,
                got: other.nvars,
            });
        }
        let mut out = Self::zero(&self.ctx, self.nvars, self.degree + other.degree);
        for (j, a) in &self.terms {
            for (k, b) in &other.terms {
                out.add_term(j.add(k), a.mul(b));
            }
        }
        Ok(out)
    }

    /// Exact value `Σ_J c_J x^J`.
    pub fn eval(&self, x: &[F]) -> Result<F, PolyError> {
        if x.len() != self.nvars {
            return Err(PolyError::VariableCount {
                expected: self.nvars,
                got: x.len(),
            });
        }
        let powers = self.powers(x);
        let mut acc = F::zero(&self.ctx);
        for (j, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in j.exponents().iter().enumerate() {
                if e > 0 {
                    t = t.mul(&powers[i][e as usize]);
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// `powers[i][e] = x_i^e` for `e ≤ degree`.
    fn powers(&self, x: &[F]) -> Vec<Vec<F>> {
        x.iter()
            .map(|xi| {
                let mut row = Vec::with_capacity(self.degree as usize + 1);
                row.push(F::one(&self.ctx));
                for e in 1..=self.degree as usize {
                    let next = row[e - 1].mul(xi);
                    row.push(next);
                }
                row
            })
            .collect()
    }

    /// `∂P/∂ξᵢ`, homogeneous of degree `d − 1` (a zero constant when `d = 0`).
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.ctx, self.nvars, self.degree.saturating_sub(1));
        for (j, c) in &self.terms {
            if let Some(lower) = j.decrement(i) {
                let factor = F::from_i64(&self.ctx, j.get(i) as i64);
                out.add_term(lower, c.mul(&factor));
            }
        }
        out
    }

    /// Value of the dehomogenization `P / ξ_c^d` at `x`.
    pub fn eval_on_chart(&self, chart: Chart, x: &[F]) -> Result<F, PolyError> {
        let u = chart.normalize(x)?;
        self.eval(&u)
    }

    /// All partial derivatives `(∂₀P(x), …, ∂_NP(x))` in one pass.
    pub fn gradient(&self, x: &[F]) -> Result<Vec<F>, PolyError> {
        if x.len() != self.nvars {
            return Err(PolyError::VariableCount {
                expected: self.nvars,
                got: x.len(),
            });
        }
        let powers = self.powers(x);
        let mut grad = vec![F::zero(&self.ctx); self.nvars];
        for (j, c) in &self.terms {
            let e = j.exponents();
            for i in 0..self.nvars {
                if e[i] == 0 {
                    continue;
                }
                let mut t = c.mul(&F::from_i64(&self.ctx, e[i] as i64));
                for (l, &el) in e.iter().enumerate() {
                    let el = if l == i { el - 1 } else { el };
                    if el > 0 {
                        t = t.mul(&powers[l][el as usize]);
                    }
                }
                grad[i] = grad[i].add(&t);
            }
        }
        Ok(grad)
    }

    /// Derivative at `x` of the dehomogenization of `P` on `chart`, in the
    /// direction `v` given in the chart's `N` affine coordinates.
    pub fn dir_derivative(&self, chart: Chart, x: &[F], v: &[F]) -> Result<F, PolyError> {
        let u = chart.normalize(x)?;
        let lifted = chart.lift(v, self.nvars)?;
        let grad = self.gradient(&u)?;
        Ok(contract(&grad, &lifted, &self.ctx))
    }

    /// The affine gradient on `chart`: partials in the chart's `N` coordinates.
    pub fn chart_gradient(&self, chart: Chart, x: &[F]) -> Result<Vec<F>, PolyError> {
        let u = chart.normalize(x)?;
        let mut grad = self.gradient(&u)?;
        grad.remove(chart.index());
        Ok(grad)
    }

    /// Maps coefficients into another field, e.g. rationals into `F_p`.
    pub fn map_field<G: Scalar>(
        &self,
        ctx: &G::Ctx,
        f: impl Fn(&F) -> Result<G, super::scalar::ScalarError>,
    ) -> Result<HomogPoly<G>, PolyError> {
        let mut out = HomogPoly::zero(ctx, self.nvars, self.degree);
        for (j, c) in &self.terms {
            out.add_term(j.clone(), f(c)?);
        }
        Ok(out)
    }
}

/// `Σ aᵢbᵢ`.
pub fn contract<F: Scalar>(a: &[F], b: &[F], ctx: &F::Ctx) -> F {
    a.iter()
        .zip(b)
        .fold(F::zero(ctx), |acc, (x, y)| acc.add(&x.mul(y)))
}

impl<F: Scalar> fmt::Display for HomogPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &e) in j.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{i}")?,
                    _ => write!(f, "*x{i}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    exp: Vec<u32>,
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct JsonPoly {
    degree: u32,
    terms: Vec<JsonTerm>,
}

impl HomogPoly<Rational> {
    /// Canonical JSON `{"degree": d, "terms": [{"exp": [...], "num": "...", "den": "..."}]}`
    /// with terms in decreasing graded-lex order.
    pub fn to_json(&self) -> serde_json::Value {
        let terms = self
            .terms()
            .map(|(j, c)| {
                let (num, den) = rational_parts(c);
                JsonTerm {
                    exp: j.exponents().to_vec(),
                    num,
                    den,
                }
            })
            .collect();
        serde_json::to_value(JsonPoly {
            degree: self.degree,
            terms,
        })
        .expect("polynomial serializes")
    }

    /// Parses the canonical JSON form. `nvars` is required only when the
    /// polynomial has no terms; otherwise it is read off the exponents.
    pub fn from_json(value: &serde_json::Value, nvars: Option<usize>) -> Result<Self, PolyError> {
        let parsed: JsonPoly =
            serde_json::from_value(value.clone()).map_err(|e| PolyError::Json(e.to_string()))?;
        let nvars = match (parsed.terms.first(), nvars) {
            (Some(t), _) => t.exp.len(),
            (None, Some(n)) => n,
            (None, None) => return Err(PolyError::Json("zero polynomial needs nvars".into())),
        };
        let mut terms = Vec::with_capacity(parsed.terms.len());
        for t in parsed.terms {
            let q = parse_rational(&format!("{}/{}", t.num, t.den))
                .map_err(|e| PolyError::Json(e.to_string()))?;
            terms.push((MultiIndex::new(t.exp), q));
        }
        Self::from_terms(&(), nvars, parsed.degree, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::scalar::parse_rational;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn pt(xs: &[&str]) -> Vec<Rational> {
        xs.iter().map(|s| q(s)).collect()
    }

    fn xi(nvars: usize, i: usize) -> HomogPoly<Rational> {
        HomogPoly::variable(&(), nvars, i)
    }

    #[test]
    fn eval_examples() {
        let p = xi(3, 0).mul(&xi(3, 0)).unwrap();
        assert_eq!(p.eval(&pt(&["1", "1", "1"])).unwrap(), q("1"));
        let p = xi(3, 0)
            .mul(&xi(3, 1))
            .unwrap()
            .add(&xi(3, 2).mul(&xi(3, 2)).unwrap())
            .unwrap();
        assert_eq!(p.eval(&pt(&["2", "3", "1"])).unwrap(), q("7"));
        let z = HomogPoly::<Rational>::zero(&(), 3, 4);
        assert_eq!(z.eval(&pt(&["5", "-1", "2/3"])).unwrap(), q("0"));
    }

    #[test]
    fn dir_derivative_examples() {
        let c0 = Chart::new(0);
        let p = HomogPoly::<Rational>::xi_power(&(), MultiIndex::new(vec![3, 0, 0]));
        assert_eq!(
            p.dir_derivative(c0, &pt(&["2", "5", "7"]), &pt(&["1", "-4"]))
                .unwrap(),
            q("0")
        );
        let p = xi(3, 1);
        assert_eq!(
            p.dir_derivative(c0, &pt(&["1", "3", "5"]), &pt(&["1", "0"]))
                .unwrap(),
            q("1")
        );
        let p = xi(3, 1).mul(&xi(3, 1)).unwrap();
        assert_eq!(
            p.dir_derivative(c0, &pt(&["1", "3", "5"]), &pt(&["1", "0"]))
                .unwrap(),
            q("6")
        );
    }

    #[test]
    fn dir_derivative_rejects_points_at_infinity() {
        let p = xi(3, 1);
        assert!(matches!(
            p.dir_derivative(Chart::new(0), &pt(&["0", "1", "1"]), &pt(&["1", "0"])),
            Err(PolyError::OnHyperplaneAtInfinity { chart: 0 })
        ));
    }

    #[test]
    fn degree_checks() {
        assert!(xi(3, 0).add(&xi(3, 0).mul(&xi(3, 1)).unwrap()).is_err());
        assert!(HomogPoly::<Rational>::from_terms(
            &(),
            3,
            2,
            vec![(MultiIndex::new(vec![1, 0, 0]), q("1"))]
        )
        .is_err());
        let p = xi(3, 0).sub(&xi(3, 0)).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn json_is_canonical() {
        let p = HomogPoly::<Rational>::from_terms(
            &(),
            3,
            2,
            vec![
                (MultiIndex::new(vec![0, 0, 2]), q("-1/2")),
                (MultiIndex::new(vec![1, 1, 0]), q("3")),
                (MultiIndex::new(vec![2, 0, 0]), q("0")),
            ],
        )
        .unwrap();
        let s = serde_json::to_string(&p.to_json()).unwrap();
        assert_eq!(
            s,
            r#"{"degree":2,"terms":[{"exp":[1,1,0],"num":"3","den":"1"},{"exp":[0,0,2],"num":"-1","den":"2"}]}"#
        );
        let back = HomogPoly::from_json(&p.to_json(), None).unwrap();
        assert_eq!(back, p);
        let z = HomogPoly::<Rational>::zero(&(), 4, 3);
        assert!(HomogPoly::from_json(&z.to_json(), None).is_err());
        assert_eq!(HomogPoly::from_json(&z.to_json(), Some(4)).unwrap(), z);
    }

    #[test]
    fn display_is_readable() {
        let p = xi(2, 0).mul(&xi(2, 1)).unwrap().scale(&q("2"));
        assert_eq!(p.to_string(), "(2)*x0*x1");
    }
}
