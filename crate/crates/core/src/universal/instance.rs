//! Instances, parameter points and the universal equation `E(a, ·)`.

use num_traits::ToPrimitive;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::poly::{multi_indices, n_delta, HomogPoly, MultiIndex, Scalar};

use super::UniversalError;

/// Shape `(N, k, δ, ε, r)` of a universal family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Instance {
    pub n: u32,
    pub k: u32,
    pub delta: u32,
    pub eps: u32,
    pub r: u32,
}

impl Instance {
    pub fn new(n: u32, k: u32, delta: u32, eps: u32, r: u32) -> Result<Self, UniversalError> {
        if n < 2 || k < 1 || k > n - 1 {
            return Err(UniversalError::InvalidInstance(format!(
                "need 1 <= k <= N-1, got N={n}, k={k}"
            )));
        }
        if delta < 1 {
            return Err(UniversalError::InvalidInstance("need delta >= 1".into()));
        }
        if eps < 1 {
            return Err(UniversalError::InvalidInstance("need eps >= 1".into()));
        }
        Ok(Instance {
            n,
            k,
            delta,
            eps,
            r,
        })
    }

    /// Non-fatal remarks about the instance.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.r == 0 {
            w.push("r = 0: accepted, but the gluing construction assumes r >= 1".to_string());
        }
        w
    }

    pub fn nvars(&self) -> usize {
        self.n as usize + 1
    }

    /// `deg E = ε + (r+1)δ`.
    pub fn e_degree(&self) -> u32 {
        self.eps + (self.r + 1) * self.delta
    }

    /// `N_δ`, the number of columns of `A`.
    pub fn num_columns(&self) -> usize {
        n_delta(self.n, self.delta)
            .to_usize()
            .expect("column count fits in usize")
    }

    /// The column labels `J`, `|J| = δ`, in enumeration order.
    pub fn columns(&self) -> Vec<MultiIndex> {
        multi_indices(self.nvars(), self.delta)
    }

    /// With a different number of tangent vectors.
    pub fn with_k(&self, k: u32) -> Result<Self, UniversalError> {
        Instance::new(self.n, k, self.delta, self.eps, self.r)
    }
}

/// `a = (a_J)_{|J| = δ}`, each `a_J` of degree `ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterPoint<F: Scalar> {
    columns: Vec<MultiIndex>,
    coeffs: Vec<HomogPoly<F>>,
}

impl<F: Scalar> ParameterPoint<F> {
    pub fn zero(ctx: &F::Ctx, inst: &Instance) -> Self {
        let columns = inst.columns();
        let coeffs = columns
            .iter()
            .map(|_| HomogPoly::zero(ctx, inst.nvars(), inst.eps))
            .collect();
        ParameterPoint { columns, coeffs }
    }

    pub fn random<R: RngCore + ?Sized>(
        ctx: &F::Ctx,
        inst: &Instance,
        rng: &mut R,
        height: u64,
    ) -> Self {
        let columns = inst.columns();
        let coeffs = columns
            .iter()
            .map(|_| HomogPoly::random(ctx, inst.nvars(), inst.eps, rng, height))
            .collect();
        ParameterPoint { columns, coeffs }
    }

    /// Builds `a` from polynomials listed in column order.
    pub fn from_polys(inst: &Instance, coeffs: Vec<HomogPoly<F>>) -> Result<Self, UniversalError> {
        let columns = inst.columns();
        if coeffs.len() != columns.len() {
            return Err(UniversalError::IndexMismatch(format!(
                "expected {} coefficients, got {}",
                columns.len(),
                coeffs.len()
            )));
        }
        for p in &coeffs {
            if p.nvars() != inst.nvars() || p.degree() != inst.eps {
                return Err(UniversalError::IndexMismatch(format!(
                    "coefficient of degree {} in {} variables, expected degree {} in {}",
                    p.degree(),
                    p.nvars(),
                    inst.eps,
                    inst.nvars()
                )));
            }
        }
        Ok(ParameterPoint { columns, coeffs })
    }

    /// Builds `a` from its coordinates in the monomial basis of `S`, ordered by
    /// `(J, m)` with both indices in enumeration order.
    pub fn from_coordinates(
        ctx: &F::Ctx,
        inst: &Instance,
        coords: &[F],
    ) -> Result<Self, UniversalError> {
        let monomials = multi_indices(inst.nvars(), inst.eps);
        let columns = inst.columns();
        if coords.len() != columns.len() * monomials.len() {
            return Err(UniversalError::IndexMismatch(format!(
                "expected {} coordinates, got {}",
                columns.len() * monomials.len(),
                coords.len()
            )));
        }
        let coeffs = coords
            .chunks(monomials.len())
            .map(|chunk| {
                HomogPoly::from_terms(
                    ctx,
                    inst.nvars(),
                    inst.eps,
                    monomials.iter().cloned().zip(chunk.iter().cloned()),
                )
                .expect("monomials have the right degree")
            })
            .collect();
        Ok(ParameterPoint { columns, coeffs })
    }

    pub fn columns(&self) -> &[MultiIndex] {
        &self.columns
    }

    pub fn coeffs(&self) -> &[HomogPoly<F>] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|p| p.is_zero())
    }

    fn position(&self, j: &MultiIndex) -> Option<usize> {
        // columns are sorted in decreasing order
        self.columns.binary_search_by(|c| j.cmp(c)).ok()
    }

    pub fn get(&self, j: &MultiIndex) -> Option<&HomogPoly<F>> {
        self.position(j).map(|i| &self.coeffs[i])
    }

    pub fn set(&mut self, j: &MultiIndex, p: HomogPoly<F>) -> Result<(), UniversalError> {
        let i = self
            .position(j)
            .ok_or_else(|| UniversalError::IndexMismatch(format!("no column {j}")))?;
        if p.nvars() != self.coeffs[i].nvars() || p.degree() != self.coeffs[i].degree() {
            return Err(UniversalError::IndexMismatch(format!(
                "wrong shape for a_{j}"
            )));
        }
        self.coeffs[i] = p;
        Ok(())
    }

    fn check(&self, inst: &Instance) -> Result<(), UniversalError> {
        let ok = self.columns.len() == inst.num_columns()
            && self
                .coeffs
                .first()
                .is_none_or(|p| p.nvars() == inst.nvars() && p.degree() == inst.eps)
            && self
                .columns
                .first()
                .is_none_or(|j| j.length() == inst.delta);
        if ok {
            Ok(())
        } else {
            Err(UniversalError::IndexMismatch(
                "parameter point does not match the instance".into(),
            ))
        }
    }
}

/// `E(a, ·) = Σ_J a_J ξ^{(r+1)J}`, of degree `ε + (r+1)δ`.
pub fn build_e<F: Scalar>(
    ctx: &F::Ctx,
    inst: &Instance,
    a: &ParameterPoint<F>,
) -> Result<HomogPoly<F>, UniversalError> {
    a.check(inst)?;
    let mut e = HomogPoly::zero(ctx, inst.nvars(), inst.e_degree());
    for (j, aj) in a.columns.iter().zip(&a.coeffs) {
        if aj.is_zero() {
            continue;
        }
        let power = HomogPoly::xi_power(ctx, j.scale(inst.r + 1));
        e = e.add(&aj.mul(&power)?)?;
    }
    Ok(e)
}

/// `x^J`.
pub fn monomial_value<F: Scalar>(j: &MultiIndex, x: &[F]) -> F {
    let ctx = x[0].ctx();
    j.exponents()
        .iter()
        .zip(x)
        .fold(F::one(&ctx), |acc, (&e, xi)| {
            if e == 0 {
                acc
            } else {
                acc.mul(&xi.pow(e as u64))
            }
        })
}

/// `dξ^J(x, w) = Σᵢ jᵢ x^{J−eᵢ} wᵢ` for `w` in homogeneous coordinates.
pub fn monomial_derivative<F: Scalar>(j: &MultiIndex, x: &[F], w: &[F]) -> F {
    let ctx = x[0].ctx();
    let mut acc = F::zero(&ctx);
    for i in j.support() {
        if w[i].is_zero() {
            continue;
        }
        let lower = j.decrement(i).expect("i in support");
        let t = monomial_value(&lower, x)
            .mul(&F::from_i64(&ctx, j.get(i) as i64))
            .mul(&w[i]);
        acc = acc.add(&t);
    }
    acc
}

/// `α_J(a, x) = a_J(x) ξ^J(x)`.
pub fn alpha<F: Scalar>(
    a: &ParameterPoint<F>,
    j: &MultiIndex,
    x: &[F],
) -> Result<F, UniversalError> {
    let aj = a
        .get(j)
        .ok_or_else(|| UniversalError::IndexMismatch(format!("no column {j}")))?;
    Ok(aj.eval(x)?.mul(&monomial_value(j, x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::scalar::{parse_rational, Rational};

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn instance_validation() {
        assert!(Instance::new(3, 0, 1, 1, 1).is_err());
        assert!(Instance::new(3, 3, 1, 1, 1).is_err());
        assert!(Instance::new(3, 1, 0, 1, 1).is_err());
        assert!(Instance::new(3, 1, 1, 0, 1).is_err());
        let inst = Instance::new(3, 2, 2, 1, 0).unwrap();
        assert_eq!(inst.warnings().len(), 1);
        assert_eq!(inst.e_degree(), 3);
        assert_eq!(inst.num_columns(), 10);
    }

    #[test]
    fn build_e_examples() {
        let inst = Instance {
            n: 1,
            k: 1,
            delta: 1,
            eps: 1,
            r: 1,
        };
        assert!(
            build_e(&(), &inst, &ParameterPoint::<Rational>::zero(&(), &inst))
                .unwrap()
                .is_zero()
        );
        let a = ParameterPoint::from_polys(
            &inst,
            vec![
                HomogPoly::variable(&(), 2, 0),
                HomogPoly::variable(&(), 2, 1),
            ],
        )
        .unwrap();
        let e = build_e(&(), &inst, &a).unwrap();
        let expected = HomogPoly::from_terms(
            &(),
            2,
            3,
            vec![
                (MultiIndex::new(vec![3, 0]), q("1")),
                (MultiIndex::new(vec![0, 3]), q("1")),
            ],
        )
        .unwrap();
        assert_eq!(e, expected);
    }

    #[test]
    fn alpha_examples() {
        let inst = Instance {
            n: 1,
            k: 1,
            delta: 1,
            eps: 1,
            r: 1,
        };
        let mut a = ParameterPoint::<Rational>::zero(&(), &inst);
        let j = MultiIndex::new(vec![1, 0]);
        let x = vec![q("1"), q("2")];
        assert_eq!(alpha(&a, &j, &x).unwrap(), q("0"));
        a.set(&j, HomogPoly::variable(&(), 2, 0)).unwrap();
        assert_eq!(alpha(&a, &j, &x).unwrap(), q("1"));
    }

    #[test]
    fn coordinates_round_trip() {
        let inst = Instance {
            n: 2,
            k: 1,
            delta: 1,
            eps: 1,
            r: 1,
        };
        let coords: Vec<Rational> = (0..9).map(|i| q(&i.to_string())).collect();
        let a = ParameterPoint::from_coordinates(&(), &inst, &coords).unwrap();
        // J = (1,0,0) is the first column, m = ξ₀ the first monomial
        assert!(a.coeffs()[0].coeff(&MultiIndex::new(vec![1, 0, 0])) == q("0"));
        assert_eq!(a.coeffs()[2].coeff(&MultiIndex::new(vec![0, 0, 1])), q("8"));
    }
}
