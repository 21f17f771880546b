//! Arithmetic in the prime field F_p for odd primes p < 2^62.
//!
//! Elements are stored as canonical representatives in `[0, p)`. Products go
//! through 128-bit intermediates when `p` does not fit in 32 bits.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest accepted modulus (exclusive).
pub const MODULUS_LIMIT: u64 = 1 << 62;

/// An odd prime `p` with `3 <= p < 2^62`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeModulus {
    p: u64,
}

impl TryFrom<u64> for PrimeModulus {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        PrimeModulus::new(p)
    }
}

impl From<PrimeModulus> for u64 {
    fn from(m: PrimeModulus) -> u64 {
        m.p
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.p)
    }
}

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p >= MODULUS_LIMIT || p % 2 == 0 || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(PrimeModulus { p })
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.p
    }

    #[inline]
    pub fn elem(self, v: u64) -> FpElem {
        FpElem {
            value: v % self.p,
            modulus: self,
        }
    }

    /// Reduces a signed integer into `[0, p)`.
    pub fn elem_i64(self, v: i64) -> FpElem {
        let r = (v as i128).rem_euclid(self.p as i128) as u64;
        FpElem {
            value: r,
            modulus: self,
        }
    }

    #[inline]
    pub fn zero(self) -> FpElem {
        self.elem(0)
    }

    #[inline]
    pub fn one(self) -> FpElem {
        self.elem(1)
    }

    #[inline]
    pub(crate) fn reduce(self, v: u64) -> u64 {
        v % self.p
    }

    #[inline]
    pub(crate) fn reduce_u128(self, v: u128) -> u64 {
        if v >> 64 == 0 {
            (v as u64) % self.p
        } else {
            (v % self.p as u128) as u64
        }
    }

    #[inline]
    pub(crate) fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub(crate) fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub(crate) fn mul(self, a: u64, b: u64) -> u64 {
        if self.p >> 32 == 0 {
            (a * b) % self.p
        } else {
            ((a as u128 * b as u128) % self.p as u128) as u64
        }
    }

    pub(crate) fn pow(self, mut base: u64, mut exp: u128) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse via the extended Euclidean algorithm; `a` must be nonzero.
    pub(crate) fn inv(self, a: u64) -> Option<u64> {
        let a = a % self.p;
        if a == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.p as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(t0.rem_euclid(self.p as i128) as u64)
    }

    /// Legendre symbol of a raw residue.
    pub(crate) fn legendre_raw(self, a: u64) -> i8 {
        let a = a % self.p;
        if a == 0 {
            return 0;
        }
        if self.pow(a, ((self.p - 1) / 2) as u128) == 1 {
            1
        } else {
            -1
        }
    }

    /// Smallest quadratic non-residue, searching upward from 2.
    pub fn least_non_residue(self) -> u64 {
        (2..self.p)
            .find(|&z| self.legendre_raw(z) == -1)
            .expect("an odd prime field always has a non-residue")
    }

    /// Tonelli-Shanks on raw residues. Returns the smaller of the two roots.
    pub(crate) fn sqrt_raw(self, a: u64) -> Option<u64> {
        let a = a % self.p;
        if a == 0 {
            return Some(0);
        }
        if self.legendre_raw(a) != 1 {
            return None;
        }
        let p = self.p;
        let root = if p % 4 == 3 {
            self.pow(a, ((p + 1) / 4) as u128)
        } else {
            let s = (p - 1).trailing_zeros();
            let q = (p - 1) >> s;
            let z = self.least_non_residue();
            let mut m = s;
            let mut c = self.pow(z, q as u128);
            let mut t = self.pow(a, q as u128);
            let mut r = self.pow(a, ((q + 1) / 2) as u128);
            while t != 1 {
                let mut i = 0;
                let mut t2 = t;
                while t2 != 1 {
                    t2 = self.mul(t2, t2);
                    i += 1;
                }
                let mut b = c;
                for _ in 0..(m - i - 1) {
                    b = self.mul(b, b);
                }
                m = i;
                c = self.mul(b, b);
                t = self.mul(t, c);
                r = self.mul(r, b);
            }
            r
        };
        let other = self.neg(root);
        Some(root.min(other))
    }
}

/// An element of F_p carrying its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FpElem {
    value: u64,
    modulus: PrimeModulus,
}

impl fmt::Display for FpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl FpElem {
    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, exp: u128) -> FpElem {
        self.modulus.elem(self.modulus.pow(self.value, exp))
    }

    pub fn inv(self) -> Result<FpElem> {
        self.modulus
            .inv(self.value)
            .map(|v| self.modulus.elem(v))
            .ok_or(Error::DivisionByZero)
    }

    /// Legendre symbol `(a | p)`: 0 for zero, +1 for nonzero squares, -1 otherwise.
    pub fn legendre(self) -> i8 {
        self.modulus.legendre_raw(self.value)
    }

    /// Square root via Tonelli-Shanks. Of the two roots the smaller canonical
    /// representative is returned.
    pub fn sqrt(self) -> Result<FpElem> {
        self.modulus
            .sqrt_raw(self.value)
            .map(|v| self.modulus.elem(v))
            .ok_or(Error::NonResidue {
                value: self.value,
                p: self.modulus.p,
            })
    }

    fn check(self, other: FpElem) {
        assert_eq!(self.modulus, other.modulus, "F_p operands over different moduli");
    }
}

impl Add for FpElem {
    type Output = FpElem;
    fn add(self, rhs: FpElem) -> FpElem {
        self.check(rhs);
        self.modulus.elem(self.modulus.add(self.value, rhs.value))
    }
}

impl Sub for FpElem {
    type Output = FpElem;
    fn sub(self, rhs: FpElem) -> FpElem {
        self.check(rhs);
        self.modulus.elem(self.modulus.sub(self.value, rhs.value))
    }
}

impl Mul for FpElem {
    type Output = FpElem;
    fn mul(self, rhs: FpElem) -> FpElem {
        self.check(rhs);
        self.modulus.elem(self.modulus.mul(self.value, rhs.value))
    }
}

impl Div for FpElem {
    type Output = FpElem;
    /// Panics on division by zero; use [`FpElem::inv`] for a fallible form.
    fn div(self, rhs: FpElem) -> FpElem {
        self * rhs.inv().expect("division by zero in F_p")
    }
}

impl Neg for FpElem {
    type Output = FpElem;
    fn neg(self) -> FpElem {
        self.modulus.elem(self.modulus.neg(self.value))
    }
}

/// Legendre symbol of `a`.
pub fn legendre(a: FpElem) -> i8 {
    a.legendre()
}

/// Square root in F_p, smaller representative of the pair.
pub fn fp_sqrt(a: FpElem) -> Result<FpElem> {
    a.sqrt()
}

/// 2-adic valuation: the exponent of the largest power of two dividing `m`.
pub fn nu2(m: u128) -> Result<u32> {
    if m == 0 {
        return Err(Error::ZeroValuation);
    }
    Ok(m.trailing_zeros())
}

/// `nu2(p^n - 1)` for odd `p` without forming `p^n`: `nu2(p - 1)` for odd
/// `n`, and `nu2(p - 1) + nu2(p + 1) + nu2(n) - 1` for even `n`.
pub fn nu2_prime_power_minus_one(p: PrimeModulus, n: usize) -> Result<u32> {
    if n == 0 {
        return Err(Error::ZeroValuation);
    }
    let p = p.value() as u128;
    let base = nu2(p - 1)?;
    if n % 2 == 1 {
        Ok(base)
    } else {
        Ok(base + nu2(p + 1)? + nu2(n as u128)? - 1)
    }
}

/// `p^n` if it fits in 128 bits.
pub fn checked_prime_power(p: u64, n: usize) -> Option<u128> {
    (p as u128).checked_pow(u32::try_from(n).ok()?)
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u64(acc, b, m);
        }
        b = mul_mod_u64(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic primality test: trial division below 2^32, Miller-Rabin
/// with the first twelve prime bases above (exact for all 64-bit inputs).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    if n >> 32 == 0 {
        let mut d = 3u64;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 2;
        }
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Odd primes in `[3, limit]`.
pub fn odd_primes_up_to(limit: u64) -> Vec<u64> {
    (3..=limit).step_by(2).filter(|&p| is_prime(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn nu2_of_prime_power_matches_direct() {
        for p in odd_primes_up_to(97) {
            let m = PrimeModulus::new(p).unwrap();
            for n in 1..=16 {
                let direct = nu2(checked_prime_power(p, n).unwrap() - 1).unwrap();
                assert_eq!(nu2_prime_power_minus_one(m, n).unwrap(), direct, "p={p} n={n}");
            }
        }
    }

    #[test]
    fn nu2_values() {
        assert_eq!(nu2(48).unwrap(), 4);
        assert_eq!(nu2(6).unwrap(), 1);
        assert_eq!(nu2(7).unwrap(), 0);
        assert_eq!(nu2(23 * 23 - 1).unwrap(), 4);
        assert_eq!(nu2(31 * 31 - 1).unwrap(), 6);
        assert_eq!(nu2(0), Err(Error::ZeroValuation));
    }

    #[test]
    fn modulus_validation() {
        assert!(PrimeModulus::new(2).is_err());
        assert!(PrimeModulus::new(9).is_err());
        assert!(PrimeModulus::new(1).is_err());
        assert!(PrimeModulus::new(MODULUS_LIMIT + 1).is_err());
        assert!(PrimeModulus::new(7).is_ok());
        // largest prime below 2^62
        assert!(PrimeModulus::new((1 << 62) - 57).is_ok());
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
        assert!(!is_prime(4_759_123_141 * 3));
    }

    #[test]
    fn legendre_mod_7() {
        let p = m(7);
        assert_eq!(p.elem(0).legendre(), 0);
        assert_eq!(p.elem(1).legendre(), 1);
        // squares mod 7 are {1, 2, 4}
        assert_eq!(p.elem(6).legendre(), -1);
        let squares: Vec<u64> = (1..7).map(|x| x * x % 7).collect();
        for a in 1..7 {
            let expect = if squares.contains(&a) { 1 } else { -1 };
            assert_eq!(p.elem(a).legendre(), expect);
        }
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(fp_sqrt(m(5).elem(4)).unwrap().value(), 2);
        assert_eq!(fp_sqrt(m(7).elem(0)).unwrap().value(), 0);
        assert_eq!(fp_sqrt(m(7).elem(2)).unwrap().value(), 3);
        assert_eq!(fp_sqrt(m(7).elem(3)), Err(Error::NonResidue { value: 3, p: 7 }));
    }

    #[test]
    fn sqrt_exhaustive_small_primes() {
        for p in odd_primes_up_to(200) {
            let md = m(p);
            for a in 0..p {
                let e = md.elem(a);
                match e.sqrt() {
                    Ok(r) => {
                        assert_eq!(r * r, e);
                        assert!(r.value() <= p - r.value() || r.value() == 0);
                    }
                    Err(_) => assert_eq!(e.legendre(), -1),
                }
            }
        }
    }

    #[test]
    fn signed_reduction() {
        assert_eq!(m(7).elem_i64(-1).value(), 6);
        assert_eq!(m(7).elem_i64(-15).value(), 6);
    }

    proptest! {
        #[test]
        fn field_axioms(a in 0u64..1_000_000_007, b in 0u64..1_000_000_007, c in 0u64..1_000_000_007) {
            let p = m(1_000_000_007);
            let (a, b, c) = (p.elem(a), p.elem(b), p.elem(c));
            prop_assert_eq!((a + b) * c, a * c + b * c);
            prop_assert_eq!(a - b + b, a);
            prop_assert_eq!(a + (-a), p.zero());
            if !a.is_zero() {
                prop_assert_eq!(a * a.inv().unwrap(), p.one());
            }
        }

        #[test]
        fn wide_modulus_arithmetic(a in 0u64..u64::MAX, b in 0u64..u64::MAX) {
            let p = m((1 << 62) - 57);
            let (x, y) = (p.elem(a), p.elem(b));
            let expect = ((x.value() as u128 * y.value() as u128) % p.value() as u128) as u64;
            prop_assert_eq!((x * y).value(), expect);
            if !x.is_zero() {
                prop_assert_eq!(x * x.inv().unwrap(), p.one());
            }
            let sq = x * x;
            let r = sq.sqrt().unwrap();
            prop_assert_eq!(r * r, sq);
        }

        #[test]
        fn legendre_multiplicative(a in 1u64..10_007, b in 1u64..10_007) {
            let p = m(10_007);
            let (a, b) = (p.elem(a), p.elem(b));
            prop_assert_eq!((a * b).legendre(), a.legendre() * b.legendre());
        }
    }
}
