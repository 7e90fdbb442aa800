//! `Ψ(a, η) = (Δ(a, η), [ξ(x)^r])` and the incidence with `𝒴`.

use rand::RngCore;

use crate::linalg::kernel_basis;
use crate::partition::JumpSequence;
use crate::poly::{Chart, HomogPoly, MultiIndex, Scalar};
use crate::universal::frame::MAX_RETRIES;
use crate::universal::instance::monomial_value;
use crate::universal::{build_a, build_e, FlagFrame, Instance, ParameterPoint, UniversalError};

use super::delta::{delta_coords, DeltaCoordinates};
use super::PluckerError;

/// Value of `Ψ` at a frame.
#[derive(Clone, Debug)]
pub struct PsiValue<F: Scalar> {
    pub delta: DeltaCoordinates<F>,
    /// `z = (x₀^r, …, x_N^r)` for the frame's normalized `x`.
    pub z: Vec<F>,
}

/// `z = x^r` coordinatewise.
pub fn z_point<F: Scalar>(x: &[F], r: u32) -> Vec<F> {
    x.iter().map(|v| v.pow(r as u64)).collect()
}

pub fn psi<F: Scalar>(
    inst: &Instance,
    a: &ParameterPoint<F>,
    frame: &FlagFrame<F>,
    s: &JumpSequence,
) -> Result<PsiValue<F>, PluckerError> {
    let delta = delta_coords(inst, a, frame, s)?;
    Ok(PsiValue {
        delta,
        z: z_point(frame.x(), inst.r),
    })
}

/// Row contractions `Σ_J A_{iJ} z^J` at a tangent frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiVerdict<F: Scalar> {
    pub contractions: Vec<F>,
    pub all_zero: bool,
}

/// Checks that every row of `A` contracts to zero against `z = x^r`, after
/// verifying exactly that `E(a, x) = 0` and `dE(x, vᵢ) = 0` for all `i`.
pub fn verify_psi_in_y<F: Scalar>(
    inst: &Instance,
    a: &ParameterPoint<F>,
    frame: &FlagFrame<F>,
) -> Result<PsiVerdict<F>, PluckerError> {
    let ctx = frame.x()[0].ctx();
    let e = build_e(&ctx, inst, a)?;
    if !e.eval(frame.x())?.is_zero() {
        return Err(PluckerError::NotTangent("E(a, x) != 0".into()));
    }
    for (i, v) in frame.vs().iter().enumerate() {
        if !e.dir_derivative(frame.chart(), frame.x(), v)?.is_zero() {
            return Err(PluckerError::NotTangent(format!("dE(x, v{}) != 0", i + 1)));
        }
    }
    let m = build_a(inst, a, frame)?;
    let z = z_point(frame.x(), inst.r);
    let zj: Vec<F> = m.columns().iter().map(|j| monomial_value(j, &z)).collect();
    let contractions: Vec<F> = (0..m.rows())
        .map(|r| {
            m.matrix()
                .row(r)
                .iter()
                .zip(&zj)
                .fold(F::zero(&ctx), |acc, (aij, zj)| acc.add(&aij.mul(zj)))
        })
        .collect();
    let all_zero = contractions.iter().all(|c| c.is_zero());
    Ok(PsiVerdict {
        contractions,
        all_zero,
    })
}

/// A random hypersurface `H_a` together with a frame tangent to it.
///
/// `x` is drawn with nonzero coordinates on chart 0; `E(a, x)` is linear in
/// the coefficients of `a`, so one coefficient of `a_{J₀}` is solved to put
/// `x` on `H_a`. The vectors are random combinations of a basis of
/// `ker dE_x`, which is redrawn when `dE_x = 0`.
pub fn tangent_frame<F: Scalar, R: RngCore + ?Sized>(
    ctx: &F::Ctx,
    inst: &Instance,
    rng: &mut R,
    height: u64,
) -> Result<(ParameterPoint<F>, FlagFrame<F>), PluckerError> {
    let chart = Chart::new(0);
    let columns = inst.columns();
    let j0 = &columns[0];
    for _ in 0..MAX_RETRIES {
        let mut a = ParameterPoint::random(ctx, inst, rng, height);
        let x: Vec<F> = (0..inst.nvars())
            .map(|i| {
                if i == 0 {
                    F::one(ctx)
                } else {
                    F::random_nonzero(ctx, rng, height)
                }
            })
            .collect();
        let e = build_e(ctx, inst, &a)?;
        let residual = e.eval(&x)?;
        // a_{J₀} += t·ξ₀^ε shifts E(a, x) by t·x₀^ε·x^{(r+1)J₀}
        let m0 = MultiIndex::unit(inst.nvars(), 0, inst.eps);
        let weight = monomial_value(&m0, &x).mul(&monomial_value(&j0.scale(inst.r + 1), &x));
        let t = residual.neg().div(&weight).map_err(UniversalError::from)?;
        let shifted = a
            .get(j0)
            .expect("first column")
            .add(&HomogPoly::monomial(ctx, m0, t))?;
        a.set(j0, shifted)?;
        let e = build_e(ctx, inst, &a)?;
        debug_assert!(e.eval(&x)?.is_zero());
        let grad = e.chart_gradient(chart, &x)?;
        if grad.iter().all(|g| g.is_zero()) {
            continue;
        }
        let kernel = kernel_basis(&[grad], ctx);
        let vs: Vec<Vec<F>> = (0..inst.k)
            .map(|_| {
                let mut v = vec![F::zero(ctx); inst.n as usize];
                for b in &kernel {
                    let c = F::random(ctx, rng, height);
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi = vi.add(&c.mul(bi));
                    }
                }
                v
            })
            .collect();
        if let Ok(frame) = FlagFrame::new(chart, x, vs) {
            return Ok((a, frame));
        }
    }
    Err(UniversalError::SamplingFailure(MAX_RETRIES).into())
}
