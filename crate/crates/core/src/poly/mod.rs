//! Dense univariate polynomials over F_p.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::fp::{FpElem, PrimeModulus};
use crate::mul::multiply;

mod irreducible;
mod modular;
mod parse;
mod transform;

pub use irreducible::{first_irreducible, is_irreducible, monic_irreducibles, monic_polys};
pub use modular::PolyModulus;
pub use transform::{
    lambda_value, q_irreducibility_predicate, q_transform, r_irreducibility_predicate, r_transform, reciprocal,
};

/// Polynomial with coefficients in ascending degree order and no trailing
/// zeros; the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    modulus: PrimeModulus,
    coeffs: Vec<u64>,
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpPoly({} mod {})", self, self.modulus)
    }
}

impl FpPoly {
    pub fn zero(modulus: PrimeModulus) -> Self {
        FpPoly {
            modulus,
            coeffs: Vec::new(),
        }
    }

    pub fn one(modulus: PrimeModulus) -> Self {
        Self::constant(modulus.one())
    }

    pub fn x(modulus: PrimeModulus) -> Self {
        FpPoly {
            modulus,
            coeffs: vec![0, 1],
        }
    }

    pub fn constant(c: FpElem) -> Self {
        Self::from_raw(c.modulus(), vec![c.value()])
    }

    /// `c * x^k`
    pub fn monomial(c: FpElem, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c.value();
        Self::from_raw(c.modulus(), coeffs)
    }

    /// From ascending coefficients, each reduced mod p.
    pub fn from_coeffs(modulus: PrimeModulus, coeffs: &[u64]) -> Self {
        Self::from_raw(modulus, coeffs.iter().map(|&c| modulus.reduce(c)).collect())
    }

    /// From ascending signed coefficients, each reduced mod p.
    pub fn from_i64(modulus: PrimeModulus, coeffs: &[i64]) -> Self {
        Self::from_raw(modulus, coeffs.iter().map(|&c| modulus.elem_i64(c).value()).collect())
    }

    /// Coefficients must already be reduced.
    pub(crate) fn from_raw(modulus: PrimeModulus, mut coeffs: Vec<u64>) -> Self {
        debug_assert!(coeffs.iter().all(|&c| c < modulus.value()));
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { modulus, coeffs }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    /// Ascending coefficients, canonical representatives.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FpElem {
        self.modulus.elem(self.coeffs.get(i).copied().unwrap_or(0))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree, with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> FpElem {
        self.modulus.elem(self.coeffs.last().copied().unwrap_or(0))
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn is_x(&self) -> bool {
        self.coeffs == [0, 1]
    }

    /// True for `x + 1` and `x - 1`.
    pub fn is_x_plus_minus_one(&self) -> bool {
        self.coeffs.len() == 2
            && self.coeffs[1] == 1
            && (self.coeffs[0] == 1 || self.coeffs[0] == self.modulus.value() - 1)
    }

    pub fn monic(&self) -> FpPoly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = self.leading().inv().expect("leading coefficient is nonzero");
        self.scale(inv)
    }

    pub fn scale(&self, c: FpElem) -> FpPoly {
        self.check(c.modulus());
        let md = self.modulus;
        Self::from_raw(md, self.coeffs.iter().map(|&a| md.mul(a, c.value())).collect())
    }

    /// Horner evaluation at a point of F_p.
    pub fn eval(&self, at: FpElem) -> FpElem {
        self.check(at.modulus());
        let md = self.modulus;
        let v = self
            .coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| md.add(md.mul(acc, at.value()), c));
        md.elem(v)
    }

    pub fn derivative(&self) -> FpPoly {
        let md = self.modulus;
        Self::from_raw(
            md,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| md.mul(c, md.reduce(i as u64)))
                .collect(),
        )
    }

    fn check(&self, other: PrimeModulus) {
        assert_eq!(self.modulus, other, "polynomials over different moduli");
    }

    fn same_modulus(&self, other: &FpPoly) -> Result<()> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(Error::ModulusMismatch)
        }
    }

    pub fn try_add(&self, other: &FpPoly) -> Result<FpPoly> {
        self.same_modulus(other)?;
        let md = self.modulus;
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (&self.coeffs, &other.coeffs)
        } else {
            (&other.coeffs, &self.coeffs)
        };
        let mut out = long.clone();
        for (o, &s) in out.iter_mut().zip(short) {
            *o = md.add(*o, s);
        }
        Ok(Self::from_raw(md, out))
    }

    pub fn try_sub(&self, other: &FpPoly) -> Result<FpPoly> {
        self.same_modulus(other)?;
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &FpPoly) -> Result<FpPoly> {
        self.same_modulus(other)?;
        Ok(Self::from_raw(
            self.modulus,
            multiply(&self.coeffs, &other.coeffs, self.modulus),
        ))
    }

    /// Quotient and remainder; the divisor may be non-monic.
    pub fn div_rem(&self, divisor: &FpPoly) -> Result<(FpPoly, FpPoly)> {
        self.same_modulus(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let md = self.modulus;
        let db = divisor.deg();
        if self.coeffs.len() <= db {
            return Ok((FpPoly::zero(md), self.clone()));
        }
        let lead_inv = divisor.leading().inv()?;
        let monic = divisor.scale(lead_inv);
        let (q, r) = modular::div_rem_monic(&self.coeffs, &monic.coeffs, md);
        let q = FpPoly::from_raw(md, q).scale(lead_inv);
        Ok((q, FpPoly::from_raw(md, r)))
    }

    pub fn rem(&self, divisor: &FpPoly) -> Result<FpPoly> {
        self.div_rem(divisor).map(|(_, r)| r)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &FpPoly) -> Result<FpPoly> {
        self.same_modulus(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Extended Euclid: returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &FpPoly) -> Result<(FpPoly, FpPoly, FpPoly)> {
        self.same_modulus(other)?;
        let md = self.modulus;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (FpPoly::one(md), FpPoly::zero(md));
        let (mut t0, mut t1) = (FpPoly::zero(md), FpPoly::one(md));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s2);
            (t0, t1) = (t1, t2);
        }
        if r0.is_zero() {
            return Ok((r0, s0, t0));
        }
        let inv = r0.leading().inv()?;
        Ok((r0.scale(inv), s0.scale(inv), t0.scale(inv)))
    }

    /// `base^exp mod modpoly` by square-and-multiply.
    pub fn pow_mod(&self, exp: u128, modpoly: &FpPoly) -> Result<FpPoly> {
        self.same_modulus(modpoly)?;
        if modpoly.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let ctx = PolyModulus::new(&modpoly.monic())?;
        let base = ctx.reduce_poly(self);
        Ok(ctx.pow(&base, exp))
    }

    /// Resultant `Res(self, other)`; for monic `self` this is the product of
    /// `other` evaluated at the roots of `self`.
    pub fn resultant(&self, other: &FpPoly) -> Result<FpElem> {
        self.same_modulus(other)?;
        let md = self.modulus;
        if self.is_zero() || other.is_zero() {
            return Ok(md.zero());
        }
        let mut a = self.clone();
        let mut b = other.clone();
        let mut acc = md.one();
        loop {
            let (da, db) = (a.deg(), b.deg());
            if db == 0 {
                return Ok(acc * b.leading().pow(da as u128));
            }
            let r = a.rem(&b)?;
            if r.is_zero() {
                return Ok(md.zero());
            }
            let dr = r.deg();
            if (da * db) % 2 == 1 {
                acc = -acc;
            }
            acc = acc * b.leading().pow((da - dr) as u128);
            a = b;
            b = r;
        }
    }

    /// Compares coefficient vectors from the leading coefficient downward.
    pub fn cmp_descending(&self, other: &FpPoly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl Add for &FpPoly {
    type Output = FpPoly;
    fn add(self, rhs: &FpPoly) -> FpPoly {
        self.try_add(rhs).expect("polynomials over different moduli")
    }
}

impl Sub for &FpPoly {
    type Output = FpPoly;
    fn sub(self, rhs: &FpPoly) -> FpPoly {
        self.try_sub(rhs).expect("polynomials over different moduli")
    }
}

impl Mul for &FpPoly {
    type Output = FpPoly;
    fn mul(self, rhs: &FpPoly) -> FpPoly {
        self.try_mul(rhs).expect("polynomials over different moduli")
    }
}

impl Neg for &FpPoly {
    type Output = FpPoly;
    fn neg(self) -> FpPoly {
        let md = self.modulus;
        FpPoly::from_raw(md, self.coeffs.iter().map(|&c| md.neg(c)).collect())
    }
}
