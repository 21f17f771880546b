//! The extension field F_{p^n} = F_p[x]/(f) and the operations built on it:
//! quadratic residuosity, square roots via a linear system, minimal
//! polynomials, the map `theta(x) = (x + 1/x) / 2`, and the factorization of
//! `f^R` into two conjugate-reciprocal halves.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::fp::{checked_prime_power, FpElem, PrimeModulus};
use crate::linalg::{solve_nullspace, FpMatrix, FpVector};
use crate::poly::{is_irreducible, lambda_value, r_transform, reciprocal, FpPoly, PolyModulus};

struct FieldInner {
    modulus: FpPoly,
    ctx: PolyModulus,
    /// Column j holds the coordinates of `b^(p j)`; built on first use.
    frobenius: OnceLock<FpMatrix>,
}

/// F_p[x]/(f) for a monic irreducible `f`, with `b` denoting the class of `x`.
/// Cheap to clone; elements hold a shared handle.
#[derive(Clone)]
pub struct ExtField {
    inner: Arc<FieldInner>,
}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtField(F_{}[x]/({}))", self.p(), self.inner.modulus)
    }
}

impl PartialEq for ExtField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.modulus == other.inner.modulus
    }
}

impl Eq for ExtField {}

impl ExtField {
    /// Checks that `modulus` is monic and irreducible.
    pub fn new(modulus: &FpPoly) -> Result<Self> {
        let field = Self::new_unchecked(modulus)?;
        if !is_irreducible(modulus)? {
            return Err(Error::Reducible(modulus.to_string()));
        }
        Ok(field)
    }

    /// Skips the irreducibility check; callers must know `modulus` is irreducible.
    pub fn new_unchecked(modulus: &FpPoly) -> Result<Self> {
        let ctx = PolyModulus::new(modulus)?;
        Ok(ExtField {
            inner: Arc::new(FieldInner {
                modulus: modulus.clone(),
                ctx,
                frobenius: OnceLock::new(),
            }),
        })
    }

    /// F_{p^n} presented by the first irreducible of degree `n`.
    pub fn of_degree(md: PrimeModulus, n: usize) -> Result<Self> {
        Self::new_unchecked(&crate::poly::first_irreducible(md, n)?)
    }

    pub fn p(&self) -> PrimeModulus {
        self.inner.modulus.modulus()
    }

    pub fn degree(&self) -> usize {
        self.inner.modulus.deg()
    }

    pub fn modulus_poly(&self) -> &FpPoly {
        &self.inner.modulus
    }

    /// `q = p^n`, if it fits in 128 bits.
    pub fn size(&self) -> Option<u128> {
        checked_prime_power(self.p().value(), self.degree())
    }

    pub fn zero(&self) -> ExtElem {
        ExtElem {
            field: self.clone(),
            coords: vec![0; self.degree()],
        }
    }

    pub fn one(&self) -> ExtElem {
        self.from_fp(self.p().one())
    }

    /// The class of `x`, a root of the modulus.
    pub fn generator(&self) -> ExtElem {
        self.from_poly(&FpPoly::x(self.p()))
    }

    pub fn from_fp(&self, c: FpElem) -> ExtElem {
        assert_eq!(c.modulus(), self.p());
        let mut e = self.zero();
        e.coords[0] = c.value();
        e
    }

    pub fn from_poly(&self, g: &FpPoly) -> ExtElem {
        assert_eq!(g.modulus(), self.p());
        self.from_raw(self.inner.ctx.reduce(g.coeffs()))
    }

    /// From coordinates `(c_0, ..., c_{n-1})` in the basis `1, b, ..., b^(n-1)`.
    pub fn from_coords(&self, coords: &[u64]) -> Result<ExtElem> {
        if coords.len() > self.degree() {
            return Err(Error::InvalidArgument(format!(
                "{} coordinates for a degree-{} extension",
                coords.len(),
                self.degree()
            )));
        }
        let md = self.p();
        Ok(self.from_raw(coords.iter().map(|&c| md.reduce(c)).collect()))
    }

    fn from_raw(&self, mut coords: Vec<u64>) -> ExtElem {
        coords.resize(self.degree(), 0);
        ExtElem {
            field: self.clone(),
            coords,
        }
    }

    /// n x n matrix of the Frobenius map `u -> u^p` in the power basis.
    pub fn frobenius_matrix(&self) -> &FpMatrix {
        self.inner.frobenius.get_or_init(|| {
            let n = self.degree();
            let ctx = &self.inner.ctx;
            let xp = ctx.frobenius_of_x();
            let mut columns = Vec::with_capacity(n);
            let mut cur = ctx.reduce(&[1]);
            for _ in 0..n {
                let mut col = cur.clone();
                col.resize(n, 0);
                columns.push(col);
                cur = ctx.mul_raw(&cur, xp.coeffs());
            }
            FpMatrix::from_columns(self.p(), n, &columns)
        })
    }

    /// Matrix of `u -> a u` in the power basis.
    pub fn multiplication_matrix(&self, a: &ExtElem) -> FpMatrix {
        self.check(a);
        let n = self.degree();
        let b = self.generator();
        let mut columns = Vec::with_capacity(n);
        let mut cur = a.clone();
        for _ in 0..n {
            columns.push(cur.coords.clone());
            cur = cur.mul(&b);
        }
        FpMatrix::from_columns(self.p(), n, &columns)
    }

    /// Element with enumeration index `i`, where the coordinate vector
    /// `(c_0, ..., c_{n-1})` is read as base-p digits with `c_0` most significant.
    pub fn element_at(&self, mut index: u64) -> ExtElem {
        let p = self.p().value();
        let n = self.degree();
        let mut coords = vec![0; n];
        for c in coords.iter_mut().rev() {
            *c = index % p;
            index /= p;
        }
        self.from_raw(coords)
    }

    /// Inverse of [`ExtField::element_at`].
    pub fn index_of(&self, e: &ExtElem) -> u64 {
        self.check(e);
        let p = self.p().value();
        e.coords.iter().fold(0, |acc, &c| acc * p + c)
    }

    fn check(&self, e: &ExtElem) {
        assert!(e.field == *self, "element from a different field");
    }
}

/// Element `c_0 + c_1 b + ... + c_{n-1} b^(n-1)` of an [`ExtField`].
#[derive(Clone)]
pub struct ExtElem {
    field: ExtField,
    coords: Vec<u64>,
}

impl PartialEq for ExtElem {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && self.field == other.field
    }
}

impl Eq for ExtElem {}

impl fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtElem({})", self)
    }
}

/// Canonical polynomial string in the generator, written `x`.
impl fmt::Display for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_poly())
    }
}

impl ExtElem {
    pub fn field(&self) -> &ExtField {
        &self.field
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> FpElem {
        self.field.p().elem(self.coords[i])
    }

    pub fn as_poly(&self) -> FpPoly {
        FpPoly::from_coeffs(self.field.p(), &self.coords)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// Returns the F_p value when all higher coordinates vanish.
    pub fn as_fp(&self) -> Option<FpElem> {
        self.coords[1..].iter().all(|&c| c == 0).then(|| self.coord(0))
    }

    fn zip_with(&self, other: &ExtElem, op: impl Fn(u64, u64) -> u64) -> ExtElem {
        self.field.check(other);
        ExtElem {
            field: self.field.clone(),
            coords: self.coords.iter().zip(&other.coords).map(|(&a, &b)| op(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &ExtElem) -> ExtElem {
        let md = self.field.p();
        self.zip_with(other, |a, b| md.add(a, b))
    }

    pub fn sub(&self, other: &ExtElem) -> ExtElem {
        let md = self.field.p();
        self.zip_with(other, |a, b| md.sub(a, b))
    }

    pub fn neg(&self) -> ExtElem {
        let md = self.field.p();
        ExtElem {
            field: self.field.clone(),
            coords: self.coords.iter().map(|&c| md.neg(c)).collect(),
        }
    }

    pub fn mul(&self, other: &ExtElem) -> ExtElem {
        self.field.check(other);
        if self.field.degree() == 1 {
            let md = self.field.p();
            return self.field.from_raw(vec![md.mul(self.coords[0], other.coords[0])]);
        }
        let prod = self.field.inner.ctx.mul_raw(&self.coords, &other.coords);
        self.field.from_raw(prod)
    }

    pub fn scale(&self, c: FpElem) -> ExtElem {
        let md = self.field.p();
        ExtElem {
            field: self.field.clone(),
            coords: self.coords.iter().map(|&a| md.mul(a, c.value())).collect(),
        }
    }

    pub fn square(&self) -> ExtElem {
        self.mul(self)
    }

    pub fn inv(&self) -> Result<ExtElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let md = self.field.p();
        if self.field.degree() == 1 {
            let v = md.inv(self.coords[0]).ok_or(Error::DivisionByZero)?;
            return Ok(self.field.from_raw(vec![v]));
        }
        let (g, s, _) = self.as_poly().ext_gcd(self.field.modulus_poly())?;
        if g.deg() != 0 {
            return Err(Error::Invariant(format!(
                "element {self} shares the factor {g} with the modulus"
            )));
        }
        Ok(self.field.from_poly(&s))
    }

    pub fn pow(&self, mut exp: u128) -> ExtElem {
        let mut acc = self.field.one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.square();
            exp >>= 1;
        }
        acc
    }

    /// `u^p`, applied as a matrix-vector product.
    pub fn frobenius(&self) -> ExtElem {
        let coords = self.field.frobenius_matrix().mul_vec(&self.coords);
        self.field.from_raw(coords)
    }

    /// Norm down to F_p, computed as the resultant of the modulus with the
    /// coordinate polynomial.
    pub fn norm(&self) -> FpElem {
        self.field
            .modulus_poly()
            .resultant(&self.as_poly())
            .expect("same modulus")
    }

    /// Evaluates a polynomial over F_p at this element.
    pub fn eval_poly(&self, g: &FpPoly) -> ExtElem {
        assert_eq!(g.modulus(), self.field.p());
        g.coeffs().iter().rev().fold(self.field.zero(), |acc, &c| {
            acc.mul(self).add(&self.field.from_fp(self.field.p().elem(c)))
        })
    }
}

/// A point of the projective line over an extension field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProjPoint {
    Finite(ExtElem),
    Infinity,
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Finite(e) => write!(f, "{e}"),
            ProjPoint::Infinity => f.write_str("inf"),
        }
    }
}

/// Whether nonzero `u` is a square: `u^((q-1)/2) = 1`, evaluated through the
/// norm as `N(u)^((p-1)/2)`.
pub fn is_square_ext(u: &ExtElem) -> Result<bool> {
    if u.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(u.norm().legendre() == 1)
}

/// Intermediate values of [`ext_sqrt`].
#[derive(Clone, Debug)]
pub struct SqrtTrace {
    /// `A = a^((p-1)/2)`
    pub a_power: ExtElem,
    /// `Frobenius - Mult_A`; its kernel holds the solutions of `c^p = A c`.
    pub system: FpMatrix,
    pub kernel: Vec<FpVector>,
    pub c: ExtElem,
    /// `c^2 / a`, which lies in F_p.
    pub ratio: FpElem,
    pub d: FpElem,
    pub root: ExtElem,
}

/// Square root of a nonzero square, with every intermediate value.
///
/// Solves `c^p = A c` with `A = a^((p-1)/2)` as a linear system over F_p,
/// takes the kernel vector whose first nonzero coordinate is 1, and returns
/// `c / d` where `d^2 = c^2 / a` in F_p.
pub fn ext_sqrt_traced(a: &ExtElem) -> Result<SqrtTrace> {
    if !is_square_ext(a)? {
        return Err(Error::NotSquare);
    }
    let field = a.field();
    let md = field.p();
    let a_power = a.pow(((md.value() - 1) / 2) as u128);
    let system = field.frobenius_matrix().sub(&field.multiplication_matrix(&a_power));
    let kernel = solve_nullspace(&system);
    if kernel.len() != 1 {
        return Err(Error::Invariant(format!(
            "kernel of c^p = A c has dimension {} for a = {a}",
            kernel.len()
        )));
    }
    let c = field.from_coords(kernel[0].entries())?;
    let ratio_elem = c.square().mul(&a.inv()?);
    let ratio = ratio_elem
        .as_fp()
        .ok_or_else(|| Error::Invariant(format!("c^2/a = {ratio_elem} does not lie in F_p")))?;
    let d = ratio
        .sqrt()
        .map_err(|_| Error::Invariant(format!("c^2/a = {ratio} is a non-residue")))?;
    let root = c.scale(d.inv()?);
    if root.square() != *a {
        return Err(Error::Invariant(format!("computed root of {a} does not square back")));
    }
    Ok(SqrtTrace {
        a_power,
        system,
        kernel,
        c,
        ratio,
        d,
        root,
    })
}

pub fn ext_sqrt(a: &ExtElem) -> Result<ExtElem> {
    ext_sqrt_traced(a).map(|t| t.root)
}

/// Minimal polynomial over F_p: the product of `x - c` over the distinct
/// Frobenius conjugates `c` of `alpha`.
pub fn minimal_poly(alpha: &ExtElem) -> Result<FpPoly> {
    let field = alpha.field();
    let md = field.p();
    let mut conjugates = vec![alpha.clone()];
    loop {
        let next = conjugates.last().expect("nonempty").frobenius();
        if next == *alpha {
            break;
        }
        if conjugates.len() > field.degree() {
            return Err(Error::Invariant(format!(
                "Frobenius orbit of {alpha} exceeds the field degree"
            )));
        }
        conjugates.push(next);
    }
    // coefficients of prod (x - c), ascending, as field elements
    let mut acc = vec![field.one()];
    for c in &conjugates {
        let mut next = vec![field.zero(); acc.len() + 1];
        for (k, coef) in acc.iter().enumerate() {
            next[k + 1] = next[k + 1].add(coef);
            next[k] = next[k].sub(&coef.mul(c));
        }
        acc = next;
    }
    let coeffs = acc
        .iter()
        .map(|e| {
            e.as_fp()
                .map(FpElem::value)
                .ok_or_else(|| Error::Invariant(format!("minimal polynomial coefficient {e} escapes F_p")))
        })
        .collect::<Result<Vec<u64>>>()?;
    Ok(FpPoly::from_coeffs(md, &coeffs))
}

/// `theta(x) = (x + 1/x) / 2`, with `0` and `inf` sent to `inf`.
pub fn theta_apply(x: &ProjPoint) -> ProjPoint {
    match x {
        ProjPoint::Infinity => ProjPoint::Infinity,
        ProjPoint::Finite(e) if e.is_zero() => ProjPoint::Infinity,
        ProjPoint::Finite(e) => {
            let field = e.field();
            let half = field.p().elem(2).inv().expect("p is odd");
            let inv = e.inv().expect("nonzero");
            ProjPoint::Finite(e.add(&inv).scale(half))
        }
    }
}

fn validate_irreducible_input(f: &FpPoly) -> Result<()> {
    if f.is_zero() || f.deg() == 0 {
        return Err(Error::ConstantPolynomial(f.to_string()));
    }
    if !f.is_monic() {
        return Err(Error::NotMonic(f.to_string()));
    }
    if f.is_x_plus_minus_one() {
        return Err(Error::Excluded(f.to_string()));
    }
    if !is_irreducible(f)? {
        return Err(Error::Reducible(f.to_string()));
    }
    Ok(())
}

/// The minimal polynomial of `theta(b)` for a root `b` of `f`.
pub fn tilde(f: &FpPoly) -> Result<FpPoly> {
    if f.is_x() {
        return Err(Error::Excluded(f.to_string()));
    }
    validate_irreducible_input(f)?;
    let field = ExtField::new_unchecked(f)?;
    match theta_apply(&ProjPoint::Finite(field.generator())) {
        ProjPoint::Finite(t) => minimal_poly(&t),
        ProjPoint::Infinity => Err(Error::Invariant("theta of a nonzero root is infinite".into())),
    }
}

/// Outcome of factoring `f^R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RFactorization {
    /// `f^R` itself, irreducible of degree 2n.
    Irreducible(FpPoly),
    /// `f^R = g1 * g2`, both irreducible of degree n, `g2 = reciprocal(g1)`.
    Split { g1: FpPoly, g2: FpPoly },
}

impl RFactorization {
    pub fn is_split(&self) -> bool {
        matches!(self, RFactorization::Split { .. })
    }
}

/// Decides whether `f^R` is irreducible and, if not, splits it.
///
/// With `b` a root of `f`, the roots of `f^R` are `b +- sqrt(b^2 - 1)`. When
/// `b^2 - 1` is a square in F_p[x]/(f), `alpha = b + sqrt(b^2 - 1)` lies there,
/// and `f^R` is the product of the minimal polynomials of `alpha` and `1/alpha`.
pub fn factor_r(f: &FpPoly) -> Result<RFactorization> {
    validate_irreducible_input(f)?;
    factor_r_trusted(f)
}

/// [`factor_r`] without re-testing `f` for irreducibility.
pub(crate) fn factor_r_trusted(f: &FpPoly) -> Result<RFactorization> {
    let r_poly = r_transform(f)?;
    if f.is_x() && is_irreducible(&r_poly)? {
        return Ok(RFactorization::Irreducible(r_poly));
    }
    // lambda(f) is the norm of b^2 - 1, so its character settles squareness
    // without building the field
    if lambda_value(f).legendre() != 1 {
        return Ok(RFactorization::Irreducible(r_poly));
    }
    let field = ExtField::new_unchecked(f)?;
    let beta = field.generator();
    let a = beta.square().sub(&field.one());
    let alpha = beta.add(&ext_sqrt(&a)?);
    let g1 = minimal_poly(&alpha)?;
    let g2 = reciprocal(&g1)?;
    let n = f.deg();
    if g1.deg() != n || g2.deg() != n || g1 == g2 || &g1 * &g2 != r_poly {
        return Err(Error::Invariant(format!(
            "split of {r_poly} into {g1} * {g2} is inconsistent"
        )));
    }
    Ok(RFactorization::Split { g1, g2 })
}
