//! Integer exponent lattices: Hermite normal form bases, coordinates of
//! lattice members, and the small amount of exact integer linear algebra the
//! monomial changes of variables need.

use crate::error::{Error, Result};
use crate::laurent::Exponent;

/// Generators of a subgroup of `Z^n`. Duplicates and zero vectors are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    dim: usize,
    generators: Vec<Exponent>,
}

impl GeneratorSet {
    pub fn new(dim: usize, generators: Vec<Exponent>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: g.len(),
            });
        }
        Ok(Self { dim, generators })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Exponent] {
        &self.generators
    }

    pub fn hnf_basis(&self) -> Result<LatticeBasis> {
        hnf_basis(self)
    }
}

/// Row-style Hermite normal form basis of a lattice in `Z^n`.
///
/// Each row's first nonzero entry (its pivot) is positive, pivot columns
/// strictly increase, and entries above a pivot lie in `[0, pivot)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeBasis {
    dim: usize,
    rows: Vec<Exponent>,
}

impl LatticeBasis {
    /// The rank-0 lattice in `Z^dim`.
    pub fn trivial(dim: usize) -> Self {
        Self {
            dim,
            rows: Vec::new(),
        }
    }

    /// Wraps rows that are already in Hermite normal form.
    pub fn from_hnf_rows(dim: usize, rows: Vec<Exponent>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: r.len(),
            });
        }
        let basis = Self { dim, rows };
        if !basis.is_hnf() {
            return Err(Error::Document(
                "basis rows are not in Hermite normal form".into(),
            ));
        }
        Ok(basis)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Exponent] {
        &self.rows
    }

    /// Column of each row's pivot.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| r.entries().iter().position(|&e| e != 0).unwrap_or(self.dim))
            .collect()
    }

    pub fn is_hnf(&self) -> bool {
        let pivots = self.pivots();
        for (i, (row, &p)) in self.rows.iter().zip(&pivots).enumerate() {
            if p >= self.dim || row.entries()[p] <= 0 {
                return false;
            }
            if i > 0 && pivots[i - 1] >= p {
                return false;
            }
            let pivot = row.entries()[p];
            for above in &self.rows[..i] {
                let e = above.entries()[p];
                if e < 0 || e >= pivot {
                    return false;
                }
            }
        }
        true
    }

    /// Integer coordinates `k` with `sum_i k_i rows[i] = alpha`.
    pub fn coordinates(&self, alpha: &Exponent) -> Result<Exponent> {
        if alpha.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: alpha.len(),
            });
        }
        let not_in = || Error::NotInLattice(alpha.to_string());
        let mut residual: Vec<i64> = alpha.entries().to_vec();
        let mut k = Vec::with_capacity(self.rank());
        let mut col = 0;
        for (row, pivot_col) in self.rows.iter().zip(self.pivots()) {
            if residual[col..pivot_col].iter().any(|&e| e != 0) {
                return Err(not_in());
            }
            let pivot = row.entries()[pivot_col];
            let target = residual[pivot_col];
            if target % pivot != 0 {
                return Err(not_in());
            }
            let q = target / pivot;
            for (r, &a) in residual.iter_mut().zip(row.entries()) {
                *r = a
                    .checked_mul(q)
                    .and_then(|qa| r.checked_sub(qa))
                    .ok_or(Error::Overflow)?;
            }
            k.push(q);
            col = pivot_col + 1;
        }
        if residual.iter().any(|&e| e != 0) {
            return Err(not_in());
        }
        Ok(Exponent::new(k))
    }

    pub fn contains(&self, alpha: &Exponent) -> bool {
        self.coordinates(alpha).is_ok()
    }

    /// The generator `(a_1, ..., a_n)` of a rank-1 lattice, pivot positive.
    pub fn primitive_rank1_generator(&self) -> Result<&Exponent> {
        match self.rows.as_slice() {
            [row] => Ok(row),
            rows => Err(Error::RankNotOne(rows.len())),
        }
    }
}

/// Hermite normal form basis of the subgroup generated by `g`.
///
/// Elimination uses unimodular 2x2 row operations built from the extended
/// Euclidean algorithm, so the row span never changes. The output depends
/// only on the lattice, not on the order or multiplicity of generators.
pub fn hnf_basis(g: &GeneratorSet) -> Result<LatticeBasis> {
    let dim = g.dim;
    let mut rows: Vec<Vec<i64>> = g
        .generators
        .iter()
        .filter(|e| !e.is_zero())
        .map(|e| e.entries().to_vec())
        .collect();
    let mut r = 0;
    for col in 0..dim {
        if r == rows.len() {
            break;
        }
        // Fold every lower row into row r until only row r is nonzero in col.
        for j in r + 1..rows.len() {
            let b = rows[j][col];
            if b == 0 {
                continue;
            }
            let a = rows[r][col];
            if a == 0 {
                rows.swap(r, j);
                continue;
            }
            let (gcd, x, y) = ext_gcd(a, b);
            let (ag, bg) = (a as i128 / gcd, b as i128 / gcd);
            let (top, bottom) = (rows[r].clone(), rows[j].clone());
            rows[r] = combine(x, &top, y, &bottom)?;
            rows[j] = combine(ag, &bottom, -bg, &top)?;
        }
        if rows[r][col] == 0 {
            continue;
        }
        if rows[r][col] < 0 {
            rows[r] = combine(-1, &rows[r], 0, &rows[r])?;
        }
        let pivot = rows[r][col];
        let pivot_row = rows[r].clone();
        for above in rows.iter_mut().take(r) {
            let q = above[col].div_euclid(pivot) as i128;
            if q != 0 {
                *above = combine(1, above, -q, &pivot_row)?;
            }
        }
        r += 1;
    }
    rows.truncate(r);
    Ok(LatticeBasis {
        dim,
        rows: rows.into_iter().map(Exponent::new).collect(),
    })
}

/// `x*u + y*v`, checked.
fn combine(x: i128, u: &[i64], y: i128, v: &[i64]) -> Result<Vec<i64>> {
    u.iter()
        .zip(v)
        .map(|(&a, &b)| {
            x.checked_mul(a as i128)
                .zip(y.checked_mul(b as i128))
                .and_then(|(p, q)| p.checked_add(q))
                .and_then(|s| i64::try_from(s).ok())
                .ok_or(Error::Overflow)
        })
        .collect()
}

/// Returns `(g, x, y)` with `g = gcd(a, b) > 0` and `x*a + y*b = g`.
fn ext_gcd(a: i64, b: i64) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a as i128, b as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (old_r, old_s, old_t) = (-old_r, -old_s, -old_t);
    }
    (old_r, old_s, old_t)
}

/// Exact determinant of a square integer matrix (fraction-free elimination).
pub fn determinant(m: &[Vec<i64>]) -> Result<i128> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::MatrixShape { dim: n });
    }
    if n == 0 {
        return Ok(1);
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j]
                    .checked_mul(a[k][k])
                    .zip(a[i][k].checked_mul(a[k][j]))
                    .and_then(|(x, y)| x.checked_sub(y))
                    .ok_or(Error::Overflow)?;
                a[i][j] = num / prev;
            }
        }
        prev = a[k][k];
    }
    Ok(sign * a[n - 1][n - 1])
}

/// Inverse of an integer matrix with determinant `±1`, via the adjugate.
#[allow(clippy::needless_range_loop)]
pub fn unimodular_inverse(m: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let n = m.len();
    let det = determinant(m)?;
    if det.abs() != 1 {
        return Err(Error::NotUnimodular(det));
    }
    let mut inv = vec![vec![0i64; n]; n];
    for (i, row) in m.iter().enumerate() {
        for j in 0..row.len() {
            let minor: Vec<Vec<i64>> = m
                .iter()
                .enumerate()
                .filter(|&(r, _)| r != i)
                .map(|(_, r)| {
                    r.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let cof = determinant(&minor)? * if (i + j) % 2 == 0 { 1 } else { -1 };
            // adj[j][i] = cofactor(i, j); divide by det = ±1
            inv[j][i] = i64::try_from(cof * det).map_err(|_| Error::Overflow)?;
        }
    }
    Ok(inv)
}
