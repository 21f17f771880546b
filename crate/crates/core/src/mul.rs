//! Coefficient-vector multiplication over F_p.
//!
//! Short operands use schoolbook multiplication with lazily reduced
//! accumulators. Long operands go through number-theoretic transforms over up
//! to three 63-bit primes, recombined with Garner's algorithm and reduced mod p.

use std::sync::OnceLock;

use crate::fp::PrimeModulus;

/// Operands with fewer coefficients than this (in the shorter factor) use
/// schoolbook multiplication; the larger limit applies when products can be
/// accumulated in u64 without reduction.
const SCHOOLBOOK_LIMIT: usize = 48;
const SCHOOLBOOK_LIMIT_NARROW: usize = 128;

/// NTT-friendly primes `c * 2^32 + 1` in `(2^62, 2^63)` with a primitive root.
const NTT_PRIMES: [(u64, u64); 3] = [
    (9_223_372_006_790_004_737, 3),
    (9_223_371_938_070_528_001, 19),
    (9_223_371_877_940_985_857, 5),
];

/// Product of two coefficient vectors (ascending degree), reduced mod p.
pub(crate) fn multiply(a: &[u64], b: &[u64], md: PrimeModulus) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let short = a.len().min(b.len());
    let p = md.value() as u128;
    let narrow = (u64::MAX as u128 / ((p - 1) * (p - 1)).max(1)) as usize >= short;
    let limit = if narrow {
        SCHOOLBOOK_LIMIT_NARROW
    } else {
        SCHOOLBOOK_LIMIT
    };
    if short < limit {
        schoolbook(a, b, md)
    } else {
        ntt_multiply(a, b, md)
    }
}

pub(crate) fn schoolbook(a: &[u64], b: &[u64], md: PrimeModulus) -> Vec<u64> {
    let p = md.value();
    let out_len = a.len() + b.len() - 1;
    let max_prod = (p as u128 - 1) * (p as u128 - 1);
    if max_prod == 0 {
        return vec![0; out_len];
    }
    let fits_u64 = (u64::MAX as u128 / max_prod) as usize;
    if fits_u64 >= a.len().min(b.len()) {
        let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        let mut acc = vec![0u64; out_len];
        for (i, &x) in short.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (slot, &y) in acc[i..i + long.len()].iter_mut().zip(long) {
                *slot += x * y;
            }
        }
        return acc.into_iter().map(|v| v % p).collect();
    }
    // Wide modulus: reduce the u128 accumulators every `budget` rows.
    let budget = ((u128::MAX / max_prod).min(usize::MAX as u128) as usize - 1).max(1);
    let mut acc = vec![0u128; out_len];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (slot, &y) in acc[i..i + b.len()].iter_mut().zip(b) {
            *slot += x as u128 * y as u128;
        }
        if (i + 1) % budget == 0 {
            for slot in acc.iter_mut() {
                *slot %= p as u128;
            }
        }
    }
    acc.into_iter().map(|v| md.reduce_u128(v)).collect()
}

/// Montgomery arithmetic modulo a 63-bit NTT prime, R = 2^64.
#[derive(Clone, Copy)]
struct Mont {
    m: u64,
    /// -m^{-1} mod 2^64
    minv: u64,
    /// R^2 mod m
    r2: u64,
}

impl Mont {
    fn new(m: u64) -> Self {
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(m.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % m as u128) as u64;
        let r2 = ((r as u128 * r as u128) % m as u128) as u64;
        Mont {
            m,
            minv: inv.wrapping_neg(),
            r2,
        }
    }

    #[inline(always)]
    fn redc(self, t: u128) -> u64 {
        let k = (t as u64).wrapping_mul(self.minv);
        let s = t + k as u128 * self.m as u128;
        let r = (s >> 64) as u64;
        if r >= self.m {
            r - self.m
        } else {
            r
        }
    }

    /// `a * b * R^{-1} mod m`
    #[inline(always)]
    fn mul(self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    fn to_mont(self, a: u64) -> u64 {
        self.mul(a % self.m, self.r2)
    }

    #[inline(always)]
    fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }

    #[inline(always)]
    fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.m - b
        }
    }

    /// Plain modular exponentiation, result in normal form.
    fn pow_plain(self, base: u64, mut e: u64) -> u64 {
        let m = self.m as u128;
        let mut acc: u128 = 1;
        let mut b = base as u128 % m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % m;
            }
            b = b * b % m;
            e >>= 1;
        }
        acc as u64
    }
}

/// In-place cyclic NTT. Data stays in normal form since twiddles carry the
/// Montgomery factor. `roots[k]` holds the Montgomery form of a primitive
/// `2^(k+1)`-th root of unity (or its inverse for the backward transform).
fn transform(data: &mut [u64], mont: Mont, roots: &[u64]) {
    let n = data.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            data.swap(i, j);
        }
    }
    let one = mont.to_mont(1);
    let mut len = 2;
    let mut level = 0;
    let mut twiddles = Vec::with_capacity(n / 2);
    while len <= n {
        let half = len / 2;
        let w = roots[level];
        twiddles.clear();
        let mut cur = one;
        for _ in 0..half {
            twiddles.push(cur);
            cur = mont.mul(cur, w);
        }
        for chunk in data.chunks_exact_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for ((x, y), &t) in lo.iter_mut().zip(hi.iter_mut()).zip(&twiddles) {
                let u = *x;
                let v = mont.mul(*y, t);
                *x = mont.add(u, v);
                *y = mont.sub(u, v);
            }
        }
        len <<= 1;
        level += 1;
    }
}

/// Per-prime constants, all in Montgomery form: `fwd[k]` / `bwd[k]` are a
/// primitive `2^(k+1)`-th root of unity and its inverse, `inv_pow2[k]` is
/// `2^-k` premultiplied by `R` to cancel the factor left by the pointwise
/// product.
struct PrimeTables {
    mont: Mont,
    fwd: Vec<u64>,
    bwd: Vec<u64>,
    inv_pow2: Vec<u64>,
}

impl PrimeTables {
    fn new((m, g): (u64, u64)) -> Self {
        let mont = Mont::new(m);
        let mut fwd = Vec::with_capacity(32);
        let mut bwd = Vec::with_capacity(32);
        for k in 1..=32u32 {
            let w = mont.pow_plain(g, (m - 1) >> k);
            fwd.push(mont.to_mont(w));
            bwd.push(mont.to_mont(mont.pow_plain(w, m - 2)));
        }
        let half = mont.pow_plain(2, m - 2);
        let mut inv_pow2 = Vec::with_capacity(33);
        let mut cur = 1u64;
        for _ in 0..=32 {
            inv_pow2.push(mont.to_mont(mont.to_mont(cur)));
            cur = ((cur as u128 * half as u128) % m as u128) as u64;
        }
        PrimeTables {
            mont,
            fwd,
            bwd,
            inv_pow2,
        }
    }
}

fn tables() -> &'static [PrimeTables; 3] {
    static TABLES: OnceLock<[PrimeTables; 3]> = OnceLock::new();
    TABLES.get_or_init(|| NTT_PRIMES.map(PrimeTables::new))
}

fn convolve_mod_prime(a: &[u64], b: &[u64], t: &PrimeTables, size: usize) -> Vec<u64> {
    let mont = t.mont;
    let m = mont.m;
    let log = size.trailing_zeros() as usize;
    let mut fa = vec![0u64; size];
    let mut fb = vec![0u64; size];
    for (d, &s) in fa.iter_mut().zip(a) {
        *d = s % m;
    }
    for (d, &s) in fb.iter_mut().zip(b) {
        *d = s % m;
    }
    transform(&mut fa, mont, &t.fwd);
    transform(&mut fb, mont, &t.fwd);
    for (x, &y) in fa.iter_mut().zip(&fb) {
        // x * y * R^{-1}
        *x = mont.mul(*x, y);
    }
    transform(&mut fa, mont, &t.bwd);
    let scale = t.inv_pow2[log];
    for x in fa.iter_mut() {
        *x = mont.mul(*x, scale);
    }
    fa
}

fn bits(v: u128) -> u32 {
    128 - v.leading_zeros()
}

fn ntt_multiply(a: &[u64], b: &[u64], md: PrimeModulus) -> Vec<u64> {
    let p = md.value();
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    assert!(size <= 1 << 32, "operands too long for the NTT primes");
    // Each exact product coefficient is below min(len) * (p-1)^2.
    let bound_bits = bits(a.len().min(b.len()) as u128) + 2 * bits(p as u128 - 1);
    let primes = match bound_bits {
        0..=62 => 1,
        63..=124 => 2,
        _ => 3,
    };
    let residues: Vec<Vec<u64>> = tables()[..primes]
        .iter()
        .map(|t| convolve_mod_prime(a, b, t, size))
        .collect();
    let mut out = Vec::with_capacity(out_len);
    match primes {
        1 => out.extend(residues[0][..out_len].iter().map(|&r| r % p)),
        _ => {
            let m0 = NTT_PRIMES[0].0 as u128;
            let m1 = NTT_PRIMES[1].0 as u128;
            let m2 = NTT_PRIMES[2].0 as u128;
            let inv_m0_mod_m1 = modinv(m0 % m1, m1);
            let m0_mod_p = m0 % p as u128;
            let (inv_m01_mod_m2, m0_mod_m2, m01_mod_p) = if primes == 3 {
                let m01_mod_m2 = (m0 % m2) * (m1 % m2) % m2;
                (modinv(m01_mod_m2, m2), m0 % m2, m0_mod_p * (m1 % p as u128) % p as u128)
            } else {
                (0, 0, 0)
            };
            for i in 0..out_len {
                let r0 = residues[0][i] as u128;
                let r1 = residues[1][i] as u128;
                let t1 = (r1 + m1 - r0 % m1) % m1 * inv_m0_mod_m1 % m1;
                let mut v = (r0 % p as u128 + m0_mod_p * (t1 % p as u128)) % p as u128;
                if primes == 3 {
                    let r2 = residues[2][i] as u128;
                    // x mod m2 from the first two digits
                    let partial = (r0 % m2 + m0_mod_m2 * (t1 % m2)) % m2;
                    let t2 = (r2 + m2 - partial) % m2 * inv_m01_mod_m2 % m2;
                    v = (v + m01_mod_p * (t2 % p as u128)) % p as u128;
                }
                out.push(v as u64);
            }
        }
    }
    out
}

fn modinv(a: u128, m: u128) -> u128 {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    t0.rem_euclid(m as i128) as u128
}
