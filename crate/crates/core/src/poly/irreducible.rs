//! Rabin's irreducibility test and enumeration of monic polynomials.

use super::{FpPoly, PolyModulus};
use crate::error::{Error, Result};
use crate::fp::PrimeModulus;

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test: `f` of degree n is irreducible iff `x^(p^n) = x mod f` and
/// `gcd(x^(p^(n/t)) - x, f) = 1` for every prime `t | n`.
pub fn is_irreducible(f: &FpPoly) -> Result<bool> {
    if f.is_zero() || f.deg() == 0 {
        return Err(Error::ConstantPolynomial(f.to_string()));
    }
    let n = f.deg();
    if n == 1 {
        return Ok(true);
    }
    let f = f.monic();
    if f.coeffs()[0] == 0 {
        return Ok(false);
    }
    let md = f.modulus();
    let ctx = PolyModulus::new(&f)?;
    let xp = ctx.frobenius_of_x();
    let x = FpPoly::x(md);
    let mut largest: Option<(u64, FpPoly)> = None;
    for t in prime_factors(n as u64) {
        let h = ctx.frobenius_power(&xp, n as u64 / t);
        if f.gcd(&(&h - &x))?.deg() > 0 {
            return Ok(false);
        }
        if largest.as_ref().map_or(true, |(lt, _)| t < *lt) {
            largest = Some((t, h));
        }
    }
    // x^(p^n) from x^(p^(n/t)) for the smallest prime t
    let (t, h) = largest.expect("n >= 2 has a prime factor");
    let mut full = h.clone();
    for _ in 1..t {
        full = ctx.compose(&full, &h);
    }
    Ok(full == x)
}

/// All monic polynomials of degree `n`, ordered by the coefficient vector
/// `(a_{n-1}, ..., a_0)` read lexicographically, so `a_0` varies fastest and
/// the search for a first irreducible stays near `x^n`.
pub fn monic_polys(md: PrimeModulus, n: usize) -> impl Iterator<Item = FpPoly> {
    let p = md.value();
    let mut digits = vec![0u64; n];
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let mut coeffs = digits.clone();
        coeffs.push(1);
        let out = FpPoly::from_raw(md, coeffs);
        done = true;
        for d in digits.iter_mut() {
            *d += 1;
            if *d < p {
                done = false;
                break;
            }
            *d = 0;
        }
        Some(out)
    })
}

/// All monic irreducible polynomials of degree `n`.
pub fn monic_irreducibles(md: PrimeModulus, n: usize) -> impl Iterator<Item = FpPoly> {
    monic_polys(md, n).filter(|f| is_irreducible(f).unwrap_or(false))
}

/// The first monic irreducible polynomial of degree `n` in [`monic_polys`] order.
pub fn first_irreducible(md: PrimeModulus, n: usize) -> Result<FpPoly> {
    if n == 0 {
        return Err(Error::InvalidArgument("degree must be positive".into()));
    }
    Ok(monic_irreducibles(md, n)
        .next()
        .expect("irreducible polynomials exist in every degree"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn md(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    fn poly(p: u64, s: &str) -> FpPoly {
        FpPoly::parse(s, md(p)).unwrap()
    }

    /// Trial division by every monic polynomial of degree 1..=n/2.
    fn brute_irreducible(f: &FpPoly) -> bool {
        let n = f.deg();
        (1..=n / 2).all(|d| monic_polys(f.modulus(), d).all(|g| !f.rem(&g).unwrap().is_zero()))
    }

    #[test]
    fn examples() {
        assert!(is_irreducible(&poly(7, "x^2+1")).unwrap());
        assert!(!is_irreducible(&poly(7, "x^2+x+1")).unwrap());
        assert!(is_irreducible(&poly(7, "x^4-x^3-2x^2-x+1")).unwrap());
        assert!(matches!(
            is_irreducible(&poly(7, "5")),
            Err(Error::ConstantPolynomial(_))
        ));
    }

    #[test]
    fn agrees_with_trial_division() {
        for p in [3, 5, 7] {
            for n in 1..=4 {
                for f in monic_polys(md(p), n) {
                    assert_eq!(is_irreducible(&f).unwrap(), brute_irreducible(&f), "{f:?}");
                }
            }
        }
    }

    #[test]
    fn irreducible_counts_match_necklace_formula() {
        // number of monic irreducibles of degree n: (1/n) sum_{d|n} mu(d) p^(n/d)
        let expected = [(3, 6, 116), (5, 4, 150), (7, 3, 112), (3, 8, 810)];
        for (p, n, count) in expected {
            assert_eq!(monic_irreducibles(md(p), n).count(), count, "p={p} n={n}");
        }
    }

    #[test]
    fn enumeration_order() {
        let all: Vec<String> = monic_polys(md(3), 1).map(|f| f.to_string()).collect();
        assert_eq!(all, ["x", "x+1", "x+2"]);
        assert_eq!(first_irreducible(md(3), 2).unwrap().to_string(), "x^2+1");
        assert_eq!(first_irreducible(md(7), 1).unwrap().to_string(), "x");
    }

    #[test]
    fn products_of_irreducibles_are_rejected_at_scale() {
        // both factors irreducible; a product must fail in the gcd stage
        let m = md(7);
        let a = first_irreducible(m, 96).unwrap();
        let b = first_irreducible(m, 32).unwrap();
        assert!(is_irreducible(&a).unwrap());
        assert!(!is_irreducible(&(&a * &b)).unwrap());
        let sq = &b * &b;
        assert!(!is_irreducible(&sq).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn product_of_two_is_reducible(
            a in proptest::collection::vec(0u64..5, 1..6),
            b in proptest::collection::vec(0u64..5, 1..6),
        ) {
            let mut a = a; a.push(1);
            let mut b = b; b.push(1);
            let f = &FpPoly::from_coeffs(md(5), &a) * &FpPoly::from_coeffs(md(5), &b);
            prop_assert!(!is_irreducible(&f).unwrap());
        }
    }
}
