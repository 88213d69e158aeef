//! Sparse Laurent polynomials over the Gaussian rationals.
//!
//! A polynomial in `n` variables is a map from exponent vectors in `Z^n` to
//! nonzero coefficients. The map is ordered by [`Exponent`]'s graded order, so
//! iteration, printing and serialization are deterministic and structural
//! equality coincides with equality of polynomials.

use std::cmp::Ordering;
use std::collections::{btree_map::Entry, BTreeMap, BTreeSet};
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;

/// A multi-index in `Z^n`. Arithmetic is checked; overflow is an error.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exponent(Vec<i64>);

impl Exponent {
    pub fn new(entries: Vec<i64>) -> Self {
        Self(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    /// The `axis`-th standard basis vector.
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut e = vec![0; dim];
        e[axis] = 1;
        Self(e)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<i64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> i128 {
        self.0.iter().map(|&e| e as i128).sum()
    }

    pub fn checked_add(&self, other: &Exponent) -> Result<Exponent> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow))
            .collect::<Result<_>>()
            .map(Exponent)
    }

    pub fn checked_scale(&self, k: i64) -> Result<Exponent> {
        self.0
            .iter()
            .map(|a| a.checked_mul(k).ok_or(Error::Overflow))
            .collect::<Result<_>>()
            .map(Exponent)
    }

    pub fn checked_neg(&self) -> Result<Exponent> {
        self.checked_scale(-1)
    }
}

impl From<Vec<i64>> for Exponent {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl<const N: usize> From<[i64; N]> for Exponent {
    fn from(v: [i64; N]) -> Self {
        Self(v.to_vec())
    }
}

/// Graded order: total degree first, then lexicographic on the entries.
impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    dim: usize,
    terms: BTreeMap<Exponent, GaussianRational>,
}

impl LaurentPoly {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, GaussianRational::one())
    }

    pub fn constant(dim: usize, c: GaussianRational) -> Self {
        let mut p = Self::zero(dim);
        if !c.is_zero() {
            p.terms.insert(Exponent::zeros(dim), c);
        }
        p
    }

    /// `c * Z^exp`.
    pub fn monomial(dim: usize, exp: Exponent, c: GaussianRational) -> Result<Self> {
        check_len(dim, &exp)?;
        let mut p = Self::zero(dim);
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        Ok(p)
    }

    /// The coordinate function `z_{axis}` (zero-based).
    pub fn var(dim: usize, axis: usize) -> Result<Self> {
        if axis >= dim {
            return Err(Error::AxisOutOfRange { axis, dim });
        }
        Self::monomial(dim, Exponent::unit(dim, axis), GaussianRational::one())
    }

    /// Sums the given terms; like exponents are combined and zeros dropped.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, GaussianRational)>,
    {
        let mut p = Self::zero(dim);
        for (exp, c) in terms {
            check_len(dim, &exp)?;
            p.accumulate(exp, &c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in graded order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &Exponent) -> GaussianRational {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Exponent::is_zero)
    }

    pub fn constant_term(&self) -> GaussianRational {
        self.coeff(&Exponent::zeros(self.dim))
    }

    pub fn support(&self) -> BTreeSet<Exponent> {
        self.terms.keys().cloned().collect()
    }

    fn accumulate(&mut self, exp: Exponent, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same_dim(&self, other: &LaurentPoly) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_same_dim(other)?;
        let mut out = self.clone();
        for (exp, c) in &other.terms {
            out.accumulate(exp.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &GaussianRational) -> LaurentPoly {
        if k.is_zero() {
            return LaurentPoly::zero(self.dim);
        }
        LaurentPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> LaurentPoly {
        self.scale(&GaussianRational::from_integer(k))
    }

    pub fn mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_same_dim(other)?;
        let mut out = LaurentPoly::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.accumulate(ea.checked_add(eb)?, &(ca * cb));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<LaurentPoly> {
        let mut acc = LaurentPoly::one(self.dim);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// `z_axis * dp/dz_axis` (zero-based axis): each term `c Z^a` becomes
    /// `a_axis c Z^a`.
    pub fn euler_derivative(&self, axis: usize) -> Result<LaurentPoly> {
        if axis >= self.dim {
            return Err(Error::AxisOutOfRange {
                axis,
                dim: self.dim,
            });
        }
        let mut out = LaurentPoly::zero(self.dim);
        for (exp, c) in &self.terms {
            out.accumulate(exp.clone(), &c.mul_int(exp.entries()[axis]));
        }
        Ok(out)
    }

    /// Floating-point evaluation at a point of the torus.
    pub fn eval(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: point.len(),
            });
        }
        if let Some(index) = point.iter().position(|z| *z == Complex64::new(0.0, 0.0)) {
            return Err(Error::ZeroCoordinate { index });
        }
        Ok(self
            .terms
            .iter()
            .map(|(exp, c)| c.to_complex64() * monomial_value(exp, point))
            .sum())
    }

    /// Rewrites `p(Z)` as `f(W)` where `Z^a = W^{coords[a]}` for every `a` in
    /// the support. Colliding images are summed.
    pub fn rewrite_in_basis(
        &self,
        target_dim: usize,
        coords: &BTreeMap<Exponent, Exponent>,
    ) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::zero(target_dim);
        for (exp, c) in &self.terms {
            let k = coords
                .get(exp)
                .ok_or_else(|| Error::MissingCoordinate(exp.to_string()))?;
            check_len(target_dim, k)?;
            out.accumulate(k.clone(), c);
        }
        Ok(out)
    }

    /// Substitutes `W_j = Z^{images[j]}`: each term `c W^k` becomes
    /// `c Z^{sum_j k_j images[j]}` in `target_dim` variables.
    pub fn substitute_monomials(
        &self,
        images: &[Exponent],
        target_dim: usize,
    ) -> Result<LaurentPoly> {
        if images.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: images.len(),
            });
        }
        for img in images {
            check_len(target_dim, img)?;
        }
        let mut out = LaurentPoly::zero(target_dim);
        for (k, c) in &self.terms {
            let mut exp = Exponent::zeros(target_dim);
            for (kj, img) in k.entries().iter().zip(images) {
                exp = exp.checked_add(&img.checked_scale(*kj)?)?;
            }
            out.accumulate(exp, c);
        }
        Ok(out)
    }
}

/// `Z^exp` at `point`, with reciprocal powers for negative exponents.
pub(crate) fn monomial_value(exp: &Exponent, point: &[Complex64]) -> Complex64 {
    exp.entries()
        .iter()
        .zip(point)
        .fold(Complex64::new(1.0, 0.0), |acc, (&e, &z)| {
            acc * int_pow(z, e)
        })
}

fn int_pow(z: Complex64, e: i64) -> Complex64 {
    let mut base = if e < 0 { z.inv() } else { z };
    let mut k = e.unsigned_abs();
    let mut acc = Complex64::new(1.0, 0.0);
    while k > 0 {
        if k & 1 == 1 {
            acc *= base;
        }
        k >>= 1;
        if k > 0 {
            base *= base;
        }
    }
    acc
}

fn check_len(dim: usize, exp: &Exponent) -> Result<()> {
    if exp.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: exp.len(),
        });
    }
    Ok(())
}

/// Prints with the default variable names `z1, ..., zn`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = crate::text::default_vars("z", self.dim);
        f.write_str(&crate::text::format_poly(self, &names))
    }
}
