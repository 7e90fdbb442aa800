//! Exact scalar backends.
//!
//! [`Scalar`] abstracts over the two exact fields used throughout the crate:
//! arbitrary-precision rationals ([`Rational`]) and a prime field [`Fp`] with a
//! runtime modulus. The prime field is a fast probabilistic surrogate for
//! characteristic zero; rank drops it reports may be artifacts of reduction.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("modulus {0} is not a prime")]
    NotPrime(u64),
    #[error("modulus {0} is too small (need p > 2^20)")]
    ModulusTooSmall(u64),
    #[error("modulus {0} is too large (need p < 2^63)")]
    ModulusTooLarge(u64),
    #[error("denominator of {0} vanishes modulo {1}")]
    BadReduction(String, u64),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
}

/// An exact field element.
///
/// Elements know their field context ([`Scalar::ctx`]), so constants can be
/// produced from any element of the same field.
pub trait Scalar:
    Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    type Ctx: Clone + fmt::Debug + PartialEq + Eq + Send + Sync;

    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_i64(ctx: &Self::Ctx, n: i64) -> Self;
    fn from_rational(ctx: &Self::Ctx, q: &Rational) -> Result<Self, ScalarError>;
    fn ctx(&self) -> Self::Ctx;

    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self, ScalarError>;

    fn div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        Ok(self.mul(&rhs.inv()?))
    }

    fn is_one(&self) -> bool {
        *self == Self::one(&self.ctx())
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// A random element. For rationals `height` bounds numerator and denominator.
    fn random<R: RngCore + ?Sized>(ctx: &Self::Ctx, rng: &mut R, height: u64) -> Self;

    fn random_nonzero<R: RngCore + ?Sized>(ctx: &Self::Ctx, rng: &mut R, height: u64) -> Self {
        loop {
            let x = Self::random(ctx, rng, height);
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// `"Q"` or `"Fp"`.
    fn field_label(ctx: &Self::Ctx) -> &'static str;

    /// Characteristic of the field (0 for the rationals).
    fn characteristic(ctx: &Self::Ctx) -> u64;

    fn rank_of(rows: &[Vec<Self>]) -> usize {
        linalg::gaussian_rank(rows)
    }

    fn det_of(rows: &[Vec<Self>]) -> Self {
        linalg::gaussian_det(rows)
    }
}

impl Scalar for Rational {
    type Ctx = ();

    fn zero(_: &()) -> Self {
        <Rational as Zero>::zero()
    }

    fn one(_: &()) -> Self {
        <Rational as One>::one()
    }

    fn from_i64(_: &(), n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn from_rational(_: &(), q: &Rational) -> Result<Self, ScalarError> {
        Ok(q.clone())
    }

    fn ctx(&self) {}

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg(&self) -> Self {
        -self
    }

    fn inv(&self) -> Result<Self, ScalarError> {
        if Zero::is_zero(self) {
            Err(ScalarError::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }

    fn is_one(&self) -> bool {
        One::is_one(self)
    }

    fn random<R: RngCore + ?Sized>(_: &(), rng: &mut R, height: u64) -> Self {
        let h = height.max(1) as i64;
        let num = rng.gen_range(-h..=h);
        let den = rng.gen_range(1..=h);
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn field_label(_: &()) -> &'static str {
        "Q"
    }

    fn characteristic(_: &()) -> u64 {
        0
    }

    fn rank_of(rows: &[Vec<Self>]) -> usize {
        linalg::fraction_free_rank(&linalg::clear_denominators(rows))
    }

    fn det_of(rows: &[Vec<Self>]) -> Self {
        linalg::rational_det_bareiss(rows)
    }
}

/// Parses `"3"`, `"-3/4"` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational, ScalarError> {
    let err = || ScalarError::Parse(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(ScalarError::DivisionByZero);
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| err())?)),
    }
}

/// Prime field descriptor: a prime `2^20 < p < 2^63`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// The Mersenne prime `2^61 − 1`.
    pub const MERSENNE_61: u64 = (1u64 << 61) - 1;

    pub fn new(p: u64) -> Result<Self, ScalarError> {
        if p <= 1 << 20 {
            return Err(ScalarError::ModulusTooSmall(p));
        }
        if p >= 1 << 63 {
            return Err(ScalarError::ModulusTooLarge(p));
        }
        if !is_prime_u64(p) {
            return Err(ScalarError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn element(&self, v: u64) -> Fp {
        Fp {
            v: v % self.p,
            p: self.p,
        }
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField {
            p: Self::MERSENNE_61,
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Element of `Z/pZ` carrying its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    v: u64,
    p: u64,
}

impl Fp {
    pub fn value(&self) -> u64 {
        self.v
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn check(&self, rhs: &Fp) {
        debug_assert_eq!(self.p, rhs.p, "mixing prime fields");
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Scalar for Fp {
    type Ctx = PrimeField;

    fn zero(ctx: &PrimeField) -> Self {
        ctx.element(0)
    }

    fn one(ctx: &PrimeField) -> Self {
        ctx.element(1)
    }

    fn from_i64(ctx: &PrimeField, n: i64) -> Self {
        let p = ctx.p as i128;
        ctx.element((n as i128).rem_euclid(p) as u64)
    }

    fn from_rational(ctx: &PrimeField, q: &Rational) -> Result<Self, ScalarError> {
        let p = BigInt::from(ctx.p);
        let reduce = |x: &BigInt| -> u64 {
            let r = x.mod_floor(&p);
            r.to_u64().expect("residue fits in u64")
        };
        let num = ctx.element(reduce(q.numer()));
        let den = ctx.element(reduce(q.denom()));
        num.div(&den)
            .map_err(|_| ScalarError::BadReduction(q.to_string(), ctx.p))
    }

    fn ctx(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    fn is_zero(&self) -> bool {
        self.v == 0
    }

    fn add(&self, rhs: &Self) -> Self {
        self.check(rhs);
        let s = self.v as u128 + rhs.v as u128;
        Fp {
            v: (s % self.p as u128) as u64,
            p: self.p,
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.check(rhs);
        let v = if self.v >= rhs.v {
            self.v - rhs.v
        } else {
            self.p - (rhs.v - self.v)
        };
        Fp { v, p: self.p }
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.check(rhs);
        Fp {
            v: mul_mod(self.v, rhs.v, self.p),
            p: self.p,
        }
    }

    fn neg(&self) -> Self {
        Fp {
            v: if self.v == 0 { 0 } else { self.p - self.v },
            p: self.p,
        }
    }

    fn inv(&self) -> Result<Self, ScalarError> {
        if self.v == 0 {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Fp {
            v: pow_mod(self.v, self.p - 2, self.p),
            p: self.p,
        })
    }

    fn random<R: RngCore + ?Sized>(ctx: &PrimeField, rng: &mut R, _height: u64) -> Self {
        ctx.element(rng.gen_range(0..ctx.p))
    }

    fn field_label(_: &PrimeField) -> &'static str {
        "Fp"
    }

    fn characteristic(ctx: &PrimeField) -> u64 {
        ctx.p
    }
}

/// Integer content helper used by the JSON layer: returns `(numerator, denominator)`
/// as decimal strings with a positive denominator.
pub fn rational_parts(q: &Rational) -> (String, String) {
    let mut n = q.numer().clone();
    let mut d = q.denom().clone();
    if d.sign() == Sign::Minus {
        n = -n;
        d = d.abs();
    }
    (n.to_string(), d.to_string())
}
