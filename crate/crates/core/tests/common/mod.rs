//! Random generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use torus_fields::{
    default_vars, parse_poly, Exponent, Form2, GaussianRational, LaurentPoly, VectorField,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn field(ps: &[&str]) -> VectorField {
    let vars = default_vars("z", ps.len());
    VectorField::new(ps.iter().map(|s| parse_poly(s, &vars).unwrap()).collect()).unwrap()
}

pub fn rational(rng: &mut impl Rng, bound: i64) -> BigRational {
    let n = rng.gen_range(-bound..=bound);
    let d = rng.gen_range(1..=bound);
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Gaussian rational with numerators and denominators at most `bound`;
/// real about half the time.
pub fn gaussian(rng: &mut impl Rng, bound: i64) -> GaussianRational {
    let re = rational(rng, bound);
    let im = if rng.gen_bool(0.5) {
        rational(rng, bound)
    } else {
        BigRational::from_integer(0.into())
    };
    GaussianRational::new(re, im)
}

pub fn nonzero_gaussian(rng: &mut impl Rng, bound: i64) -> GaussianRational {
    loop {
        let c = gaussian(rng, bound);
        if c != GaussianRational::from_integer(0) {
            return c;
        }
    }
}

pub fn exponent_in_box(rng: &mut impl Rng, dim: usize, bound: i64) -> Exponent {
    Exponent::new((0..dim).map(|_| rng.gen_range(-bound..=bound)).collect())
}

/// Up to `max_terms` terms with exponents in `[-exp_bound, exp_bound]^dim`.
pub fn poly(
    rng: &mut impl Rng,
    dim: usize,
    max_terms: usize,
    exp_bound: i64,
    coeff_bound: i64,
) -> LaurentPoly {
    let count = rng.gen_range(0..=max_terms);
    let terms = (0..count).map(|_| {
        (
            exponent_in_box(rng, dim, exp_bound),
            gaussian(rng, coeff_bound),
        )
    });
    LaurentPoly::from_terms(dim, terms.collect::<Vec<_>>()).unwrap()
}

pub fn random_field(
    rng: &mut impl Rng,
    dim: usize,
    max_terms: usize,
    exp_bound: i64,
) -> VectorField {
    VectorField::new(
        (0..dim)
            .map(|_| poly(rng, dim, max_terms, exp_bound, 5))
            .collect(),
    )
    .unwrap()
}

/// A field whose exponents lie in the span of fewer than `dim` small
/// vectors, so the exponent lattice has rank below `dim`. Never constant.
/// Needs `dim >= 2`.
pub fn low_rank_field(
    rng: &mut impl Rng,
    dim: usize,
    max_terms: usize,
    exp_bound: i64,
) -> VectorField {
    let r = rng.gen_range(1..dim);
    let gens: Vec<Vec<i64>> = (0..r)
        .map(|_| loop {
            let v: Vec<i64> = (0..dim).map(|_| rng.gen_range(-1..=1)).collect();
            if v.iter().any(|&x| x != 0) {
                break v;
            }
        })
        .collect();
    let exponent = |rng: &mut dyn rand::RngCore| loop {
        let mut e = vec![0i64; dim];
        for g in &gens {
            let k = rng.gen_range(-2..=2);
            for (x, y) in e.iter_mut().zip(g) {
                *x += k * y;
            }
        }
        if e.iter().all(|x| x.abs() <= exp_bound) {
            break Exponent::new(e);
        }
    };
    loop {
        let ps = (0..dim)
            .map(|_| {
                let count = rng.gen_range(1..=max_terms);
                let terms: Vec<_> = (0..count)
                    .map(|_| (exponent(rng), gaussian(rng, 5)))
                    .collect();
                LaurentPoly::from_terms(dim, terms).unwrap()
            })
            .collect();
        let v = VectorField::new(ps).unwrap();
        if !v.is_constant() {
            return v;
        }
    }
}

/// Form2 data with `f` of degree at most `deg` in `w` and `w^-1`.
pub fn form2(rng: &mut impl Rng, deg: i64, a_bound: i64, coeff_bound: i64) -> Form2 {
    Form2 {
        a1: rng.gen_range(-a_bound..=a_bound),
        a2: rng.gen_range(-a_bound..=a_bound),
        f: poly(rng, 1, 4, deg, coeff_bound),
        c1: gaussian(rng, coeff_bound),
        c2: gaussian(rng, coeff_bound),
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Form2 data in the normal form that canonical extraction returns.
pub fn normalized_form2(rng: &mut impl Rng) -> Form2 {
    let c1 = gaussian(rng, 9);
    let c2 = gaussian(rng, 9);
    if rng.gen_bool(0.1) {
        return Form2 {
            a1: 0,
            a2: 0,
            f: LaurentPoly::zero(1),
            c1,
            c2,
        };
    }
    let f = loop {
        let count = rng.gen_range(1..=3);
        let terms: Vec<_> = (0..count)
            .map(|_| {
                let k = *[-4i64, -3, -2, -1, 1, 2, 3, 4].choose(rng).unwrap();
                (Exponent::new(vec![k]), nonzero_gaussian(rng, 9))
            })
            .collect();
        let f = LaurentPoly::from_terms(1, terms).unwrap();
        let g = f.terms().fold(0, |g, (e, _)| gcd(g, e.entries()[0]));
        if !f.is_zero() && g == 1 {
            break f;
        }
    };
    let (mut a1, mut a2) = loop {
        let a = (rng.gen_range(-5..=5), rng.gen_range(-5..=5));
        if a != (0, 0) {
            break a;
        }
    };
    if a1 < 0 || (a1 == 0 && a2 < 0) {
        a1 = -a1;
        a2 = -a2;
    }
    Form2 { a1, a2, f, c1, c2 }
}

/// `p_i = b_i f(Z^a) + c_i` with `a.b = 0` and `a.c = 0`, for which
/// `Z^a` is a first integral. Complete, with a one-step chain whenever `f`
/// is non-constant and `b != 0`.
pub fn resonant_field(rng: &mut impl Rng, dim: usize) -> VectorField {
    let a: Vec<i64> = loop {
        let a: Vec<i64> = (0..dim).map(|_| rng.gen_range(-1..=1)).collect();
        if a.iter().any(|&x| x != 0) {
            break a;
        }
    };
    let aa: i64 = a.iter().map(|x| x * x).sum();
    // Project random vectors onto the orthogonal complement of a, scaled
    // by |a|^2 to stay integral.
    let v: Vec<i64> = (0..dim).map(|_| rng.gen_range(-1..=1)).collect();
    let av: i64 = a.iter().zip(&v).map(|(x, y)| x * y).sum();
    let b: Vec<i64> = v.iter().zip(&a).map(|(vi, ai)| aa * vi - av * ai).collect();
    let w: Vec<GaussianRational> = (0..dim).map(|_| gaussian(rng, 3)).collect();
    let aw = a
        .iter()
        .zip(&w)
        .fold(GaussianRational::from_integer(0), |acc, (ai, wi)| {
            acc + wi.mul_int(*ai)
        });
    let c: Vec<GaussianRational> = w
        .iter()
        .zip(&a)
        .map(|(wi, ai)| wi.mul_int(aa) - aw.mul_int(*ai))
        .collect();
    let f = poly(rng, 1, 3, 2, 2).scale(&GaussianRational::from_ratio(1, aa.max(1)).unwrap());
    let fz = f
        .substitute_monomials(&[Exponent::new(a.clone())], dim)
        .unwrap();
    let ps = b
        .iter()
        .zip(c)
        .map(|(bi, ci)| {
            fz.scale_int(*bi)
                .add(&LaurentPoly::constant(dim, ci))
                .unwrap()
        })
        .collect();
    VectorField::new(ps).unwrap()
}

/// Random product of elementary integer row operations.
pub fn unimodular(rng: &mut impl Rng, dim: usize) -> Vec<Vec<i64>> {
    loop {
        let mut m: Vec<Vec<i64>> = (0..dim)
            .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
            .collect();
        for _ in 0..3 * dim {
            let i = rng.gen_range(0..dim);
            match rng.gen_range(0..4) {
                0 => m.swap(i, rng.gen_range(0..dim)),
                1 => m[i].iter_mut().for_each(|x| *x = -*x),
                _ => {
                    let j = (i + rng.gen_range(1..dim)) % dim;
                    let k = rng.gen_range(-2..=2);
                    let src = m[j].clone();
                    m[i].iter_mut().zip(src).for_each(|(x, y)| *x += k * y);
                }
            }
        }
        if m.iter().flatten().all(|x| x.abs() <= 12) {
            return m;
        }
    }
}

pub fn unit_shell_point(rng: &mut impl Rng, dim: usize) -> Vec<Complex64> {
    (0..dim)
        .map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect()
}

/// Point with moduli in `[lo, hi]`.
pub fn annulus_point(rng: &mut impl Rng, dim: usize, lo: f64, hi: f64) -> Vec<Complex64> {
    (0..dim)
        .map(|_| {
            Complex64::from_polar(
                rng.gen_range(lo..=hi),
                rng.gen_range(0.0..std::f64::consts::TAU),
            )
        })
        .collect()
}

/// `f(Z^{rows})` expanded term by term, without the library's substitution.
pub fn expand_in_monomials(f: &LaurentPoly, rows: &[Exponent], dim: usize) -> LaurentPoly {
    let terms: Vec<(Exponent, GaussianRational)> = f
        .terms()
        .map(|(k, c)| {
            let mut e = vec![0i64; dim];
            for (kj, row) in k.entries().iter().zip(rows) {
                for (x, a) in e.iter_mut().zip(row.entries()) {
                    *x += kj * a;
                }
            }
            (Exponent::new(e), c.clone())
        })
        .collect();
    LaurentPoly::from_terms(dim, terms).unwrap()
}

/// `sum_i row_i * f_i` computed by coefficient bookkeeping.
pub fn row_combination(row: &[i64], fs: &[LaurentPoly], dim: usize) -> LaurentPoly {
    let mut terms = Vec::new();
    for (a, f) in row.iter().zip(fs) {
        for (e, c) in f.terms() {
            terms.push((e.clone(), c.mul_int(*a)));
        }
    }
    LaurentPoly::from_terms(dim, terms).unwrap()
}

/// Rank over Q by fraction-free elimination.
pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let (x, y) = (m[rank][c], m[r][c]);
                let pivot = m[rank].clone();
                for (v, p) in m[r].iter_mut().zip(&pivot) {
                    *v = *v * x - p * y;
                }
                let g = m[r].iter().fold(0i128, |g, &v| {
                    let (mut a, mut b) = (g.abs(), v.abs());
                    while b != 0 {
                        (a, b) = (b, a % b);
                    }
                    a
                });
                if g > 1 {
                    m[r].iter_mut().for_each(|v| *v /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn max_relative(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm() / y.norm())
        .fold(0.0, f64::max)
}
