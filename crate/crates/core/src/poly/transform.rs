//! The R- and Q-transforms, reciprocals and the quadratic-character
//! predicates deciding irreducibility of the transformed polynomials.

use super::FpPoly;
use crate::error::{Error, Result};
use crate::fp::FpElem;

fn require_monic_positive(f: &FpPoly) -> Result<()> {
    if f.is_zero() || f.deg() == 0 {
        return Err(Error::ConstantPolynomial(f.to_string()));
    }
    if !f.is_monic() {
        return Err(Error::NotMonic(f.to_string()));
    }
    Ok(())
}

/// `sum_i a_i * v^(n-i) * (x^2+1)^i` for `f = sum_i a_i x^i`, where `v` is
/// `scale * x`. Evaluated by homogeneous Horner: `S <- S*(x^2+1) + a_i v^(n-i)`.
fn homogeneous_expand(f: &FpPoly, scale: FpElem) -> FpPoly {
    let md = f.modulus();
    let n = f.deg();
    let a = f.coeffs();
    let mut acc = vec![0u64; 2 * n + 1];
    acc[0] = a[n];
    let mut len = 1;
    let mut v_pow = md.one();
    for i in (0..n).rev() {
        // acc *= (x^2 + 1)
        for k in (0..len).rev() {
            let c = acc[k];
            acc[k + 2] = md.add(acc[k + 2], c);
        }
        len += 2;
        v_pow = v_pow * scale;
        let d = n - i;
        acc[d] = md.add(acc[d], md.mul(a[i], v_pow.value()));
    }
    FpPoly::from_raw(md, acc)
}

/// Cohen's R-transform `(2x)^n f((x + 1/x) / 2)` of a monic `f` of degree n.
pub fn r_transform(f: &FpPoly) -> Result<FpPoly> {
    require_monic_positive(f)?;
    let two = f.modulus().elem(2);
    Ok(homogeneous_expand(f, two))
}

/// Meyn's Q-transform `x^n f(x + 1/x)`.
pub fn q_transform(f: &FpPoly) -> Result<FpPoly> {
    require_monic_positive(f)?;
    Ok(homogeneous_expand(f, f.modulus().one()))
}

/// `f(0)^-1 * x^deg(f) * f(1/x)`: the monic polynomial whose roots are the
/// inverses of the roots of `f`.
pub fn reciprocal(f: &FpPoly) -> Result<FpPoly> {
    if f.is_zero() || f.coeffs()[0] == 0 {
        return Err(Error::ZeroConstantTerm(f.to_string()));
    }
    let md = f.modulus();
    let rev: Vec<u64> = f.coeffs().iter().rev().copied().collect();
    let inv = f.coeff(0).inv()?;
    Ok(FpPoly::from_raw(md, rev).scale(inv))
}

/// `lambda(f) = f(1) * f(-1)`.
pub fn lambda_value(f: &FpPoly) -> FpElem {
    let md = f.modulus();
    f.eval(md.one()) * f.eval(-md.one())
}

/// For monic irreducible `f` other than `x +- 1`: whether `f^R` is
/// irreducible, decided by `lambda(f)` being a non-square in F_p.
///
/// `lambda(f)` is the norm of `b^2 - 1` for a root `b` of `f`, and an element
/// of F_{p^n} is a square exactly when its norm is a square in F_p.
pub fn r_irreducibility_predicate(f: &FpPoly) -> Result<bool> {
    require_monic_positive(f)?;
    if f.is_x_plus_minus_one() {
        return Err(Error::Excluded(f.to_string()));
    }
    Ok(lambda_value(f).legendre() == -1)
}

/// For monic irreducible `f`: whether `f^Q` is irreducible, i.e. whether
/// `f(2) f(-2)` is a non-square.
pub fn q_irreducibility_predicate(f: &FpPoly) -> Result<bool> {
    require_monic_positive(f)?;
    let two = f.modulus().elem(2);
    Ok((f.eval(two) * f.eval(-two)).legendre() == -1)
}
