//! Arithmetic modulo a fixed monic polynomial: fast reduction through a
//! precomputed reversed inverse, exponentiation and modular composition.

use super::FpPoly;
use crate::error::{Error, Result};
use crate::fp::PrimeModulus;
use crate::mul::multiply;

/// Below this degree (of divisor and quotient), reduction uses plain long
/// division.
const LONG_DIVISION_LIMIT: usize = 16;

/// Long division by a monic divisor, raw coefficient slices.
pub(crate) fn div_rem_monic(a: &[u64], b: &[u64], md: PrimeModulus) -> (Vec<u64>, Vec<u64>) {
    let db = b.len() - 1;
    if a.len() <= db {
        return (Vec::new(), a.to_vec());
    }
    let qlen = a.len() - db;
    if db >= LONG_DIVISION_LIMIT && qlen >= LONG_DIVISION_LIMIT {
        let inv = series_inverse(&reversed(b), qlen, md);
        return div_rem_with_inverse(a, b, &inv, md);
    }
    let mut r = a.to_vec();
    let mut q = vec![0u64; qlen];
    for i in (0..qlen).rev() {
        let c = r[i + db];
        if c == 0 {
            continue;
        }
        q[i] = c;
        for (j, &bj) in b[..db].iter().enumerate() {
            r[i + j] = md.sub(r[i + j], md.mul(c, bj));
        }
        r[i + db] = 0;
    }
    r.truncate(db);
    (q, r)
}

fn reversed(a: &[u64]) -> Vec<u64> {
    a.iter().rev().copied().collect()
}

/// `1 / h mod x^prec` by Newton iteration; `h[0]` must be 1.
fn series_inverse(h: &[u64], prec: usize, md: PrimeModulus) -> Vec<u64> {
    debug_assert_eq!(h.first(), Some(&1));
    let mut g = vec![1u64];
    let mut k = 1;
    while k < prec {
        let k2 = (2 * k).min(prec);
        let hk = &h[..h.len().min(k2)];
        let mut e = multiply(hk, &g, md);
        e.resize(k2, 0);
        // e := 1 - h*g, which vanishes below degree k
        for v in e.iter_mut() {
            *v = md.neg(*v);
        }
        e[0] = md.add(e[0], 1);
        let mut corr = multiply(&g, &e[k..], md);
        corr.resize(k2 - k, 0);
        g.resize(k2, 0);
        for (gi, c) in g[k..].iter_mut().zip(corr) {
            *gi = md.add(*gi, c);
        }
        k = k2;
    }
    g.truncate(prec);
    g
}

/// Division using `inv = 1/rev(b) mod x^m` with `m >= len(a) - deg b`.
fn div_rem_with_inverse(a: &[u64], b: &[u64], inv: &[u64], md: PrimeModulus) -> (Vec<u64>, Vec<u64>) {
    let db = b.len() - 1;
    let qlen = a.len() - db;
    let rev_a: Vec<u64> = a.iter().rev().take(qlen).copied().collect();
    let mut q_rev = multiply(&rev_a, &inv[..qlen.min(inv.len())], md);
    q_rev.resize(qlen, 0);
    let q = reversed(&q_rev);
    let qb = multiply(&q, &b[..db.min(b.len())], md);
    // a = q*b + r, and only the low db coefficients of q*b matter; since b is
    // monic, q*b = q*(b - x^db) + q*x^db and the second term has no low part.
    let mut r: Vec<u64> = a[..db].to_vec();
    for (ri, &v) in r.iter_mut().zip(qb.iter()) {
        *ri = md.sub(*ri, v);
    }
    (q, r)
}

/// A monic modulus of positive degree with precomputed reduction data.
#[derive(Clone, Debug)]
pub struct PolyModulus {
    f: FpPoly,
    /// `1 / rev(f) mod x^(deg f - 1)`; empty for small degrees.
    inv_rev: Vec<u64>,
}

impl PolyModulus {
    pub fn new(f: &FpPoly) -> Result<Self> {
        if !f.is_monic() {
            return Err(Error::NotMonic(f.to_string()));
        }
        if f.deg() == 0 {
            return Err(Error::ConstantPolynomial(f.to_string()));
        }
        let n = f.deg();
        let inv_rev = if n >= LONG_DIVISION_LIMIT {
            series_inverse(&reversed(f.coeffs()), n - 1, f.modulus())
        } else {
            Vec::new()
        };
        Ok(PolyModulus { f: f.clone(), inv_rev })
    }

    pub fn poly(&self) -> &FpPoly {
        &self.f
    }

    pub fn degree(&self) -> usize {
        self.f.deg()
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.f.modulus()
    }

    /// Remainder of a raw coefficient vector.
    pub(crate) fn reduce(&self, a: &[u64]) -> Vec<u64> {
        let md = self.modulus();
        let n = self.degree();
        if a.len() <= n {
            let mut v = a.to_vec();
            while v.last() == Some(&0) {
                v.pop();
            }
            return v;
        }
        let qlen = a.len() - n;
        let (_, mut r) = if !self.inv_rev.is_empty() && qlen <= self.inv_rev.len() {
            div_rem_with_inverse(a, self.f.coeffs(), &self.inv_rev, md)
        } else {
            div_rem_monic(a, self.f.coeffs(), md)
        };
        while r.last() == Some(&0) {
            r.pop();
        }
        r
    }

    pub fn reduce_poly(&self, a: &FpPoly) -> FpPoly {
        assert_eq!(a.modulus(), self.modulus());
        FpPoly::from_raw(self.modulus(), self.reduce(a.coeffs()))
    }

    pub(crate) fn mul_raw(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.reduce(&multiply(a, b, self.modulus()))
    }

    pub fn mul(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        FpPoly::from_raw(self.modulus(), self.mul_raw(a.coeffs(), b.coeffs()))
    }

    /// `base^exp mod f`; `base` should already be reduced.
    pub fn pow(&self, base: &FpPoly, exp: u128) -> FpPoly {
        let md = self.modulus();
        let mut acc = self.reduce(&[1]);
        if exp == 0 {
            return FpPoly::from_raw(md, acc);
        }
        let base = self.reduce(base.coeffs());
        let top = 127 - exp.leading_zeros();
        for bit in (0..=top).rev() {
            acc = self.mul_raw(&acc, &acc);
            if (exp >> bit) & 1 == 1 {
                acc = self.mul_raw(&acc, &base);
            }
        }
        FpPoly::from_raw(md, acc)
    }

    /// `g(h) mod f` by the baby-step giant-step method of Brent and Kung.
    pub fn compose(&self, g: &FpPoly, h: &FpPoly) -> FpPoly {
        let md = self.modulus();
        let n = self.degree();
        if g.is_zero() {
            return FpPoly::zero(md);
        }
        let h = self.reduce(h.coeffs());
        let glen = g.coeffs().len();
        let m = ((glen as f64).sqrt().ceil() as usize).max(1);
        // baby steps: h^0 .. h^m
        let mut powers: Vec<Vec<u64>> = Vec::with_capacity(m + 1);
        powers.push(self.reduce(&[1]));
        for i in 1..=m {
            let next = self.mul_raw(&powers[i - 1], &h);
            powers.push(next);
        }
        let giant = powers.pop().expect("m >= 1");
        let p = md.value();
        let max_prod = (p as u128 - 1) * (p as u128 - 1);
        let chunk_value = |chunk: &[u64]| -> Vec<u64> {
            let mut acc = vec![0u128; n];
            let budget = if max_prod == 0 {
                usize::MAX
            } else {
                ((u128::MAX / max_prod).min(usize::MAX as u128) as usize - 1).max(1)
            };
            for (i, (&c, pw)) in chunk.iter().zip(&powers).enumerate() {
                if c == 0 {
                    continue;
                }
                for (slot, &v) in acc.iter_mut().zip(pw) {
                    *slot += c as u128 * v as u128;
                }
                if (i + 1) % budget == 0 {
                    for slot in acc.iter_mut() {
                        *slot %= p as u128;
                    }
                }
            }
            let mut out: Vec<u64> = acc.into_iter().map(|v| md.reduce_u128(v)).collect();
            while out.last() == Some(&0) {
                out.pop();
            }
            out
        };
        let chunks: Vec<&[u64]> = g.coeffs().chunks(m).collect();
        let mut acc = chunk_value(chunks[chunks.len() - 1]);
        for chunk in chunks[..chunks.len() - 1].iter().rev() {
            acc = self.mul_raw(&acc, &giant);
            let v = chunk_value(chunk);
            if acc.len() < v.len() {
                acc.resize(v.len(), 0);
            }
            for (a, b) in acc.iter_mut().zip(v) {
                *a = md.add(*a, b);
            }
            while acc.last() == Some(&0) {
                acc.pop();
            }
        }
        FpPoly::from_raw(md, acc)
    }

    /// `x^p mod f`.
    pub fn frobenius_of_x(&self) -> FpPoly {
        let md = self.modulus();
        self.pow(&FpPoly::x(md), md.value() as u128)
    }

    /// `x^(p^k) mod f`, given `xp = x^p mod f`.
    pub fn frobenius_power(&self, xp: &FpPoly, k: u64) -> FpPoly {
        let md = self.modulus();
        if k == 0 {
            return self.reduce_poly(&FpPoly::x(md));
        }
        let p = md.value();
        let n = self.degree() as f64;
        let pow_cost = (64 - p.leading_zeros() + p.count_ones()) as f64 * k as f64;
        let compose_cost = 2.0 * (64 - k.leading_zeros()) as f64 * 2.0 * n.sqrt().max(1.0);
        if pow_cost <= compose_cost {
            let mut cur = xp.clone();
            for _ in 1..k {
                cur = self.pow(&cur, p as u128);
            }
            return cur;
        }
        let top = 63 - k.leading_zeros();
        let mut cur = xp.clone();
        for bit in (0..top).rev() {
            cur = self.compose(&cur, &cur);
            if (k >> bit) & 1 == 1 {
                cur = self.compose(&cur, xp);
            }
        }
        cur
    }
}
