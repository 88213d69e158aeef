//! Rational vector fields `dz_i/dt = z_i p_i(z)` on the torus `(C*)^n` and the
//! completeness decision.
//!
//! Let `M` be the subgroup of `Z^n` generated by every exponent that occurs in
//! some `p_i`, with basis rows `a_1, ..., a_m` and `W_j = Z^{a_j}`. Each `p_i`
//! can be written as `f_i(W)`. Then:
//!
//! * if every `p_i` is constant the flow is a diagonal exponential and the
//!   field is complete;
//! * if `m = n` the field is not complete;
//! * if `m < n` the field is complete exactly when the `m`-dimensional field
//!   `dw_j/dt = w_j * sum_i a_ji f_i(w)` is.
//!
//! The recursion strictly lowers the dimension, so it terminates after at most
//! `n` steps. [`VectorField::decide_complete`] records every step in a
//! [`CompletenessCertificate`] that [`CompletenessCertificate::verify`] can
//! replay with exact arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::lattice::{determinant, hnf_basis, unimodular_inverse, GeneratorSet, LatticeBasis};
use crate::laurent::{Exponent, LaurentPoly};

/// `dz_i/dt = z_i ps[i](z)` for `i = 0..dim`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorField {
    dim: usize,
    ps: Vec<LaurentPoly>,
}

impl VectorField {
    pub fn new(ps: Vec<LaurentPoly>) -> Result<Self> {
        let dim = ps.len();
        if dim == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        Self::with_dim(dim, ps)
    }

    fn with_dim(dim: usize, ps: Vec<LaurentPoly>) -> Result<Self> {
        if ps.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: ps.len(),
            });
        }
        if let Some(p) = ps.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
        Ok(Self { dim, ps })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ps(&self) -> &[LaurentPoly] {
        &self.ps
    }

    pub fn is_constant(&self) -> bool {
        self.ps.iter().all(LaurentPoly::is_constant)
    }

    /// Every exponent occurring in some `p_i`, deduplicated.
    pub fn exponent_lattice(&self) -> GeneratorSet {
        let mut all: Vec<Exponent> = self.ps.iter().flat_map(|p| p.support()).collect();
        all.sort();
        all.dedup();
        GeneratorSet::new(self.dim, all).expect("supports have the field dimension")
    }

    pub fn lattice_basis(&self) -> Result<LatticeBasis> {
        hnf_basis(&self.exponent_lattice())
    }

    /// One reduction step: rewrite every `p_i` in the HNF basis of the
    /// exponent lattice and form the reduced field.
    pub fn reduce(&self) -> Result<ReductionStep> {
        let basis = self.lattice_basis()?;
        ReductionStep::from_basis(self, basis)
    }

    /// Decides completeness, returning the full reduction chain as evidence.
    pub fn decide_complete(&self) -> Result<CompletenessCertificate> {
        let mut chain = Vec::new();
        let mut current = self.clone();
        loop {
            if current.is_constant() {
                return Ok(CompletenessCertificate {
                    verdict: Verdict::Complete,
                    chain,
                    terminal: Terminal::BaseConstant,
                });
            }
            let basis = current.lattice_basis()?;
            if basis.rank() == current.dim {
                return Ok(CompletenessCertificate {
                    verdict: Verdict::Incomplete,
                    chain,
                    terminal: Terminal::RankEqualsDim,
                });
            }
            let step = ReductionStep::from_basis(&current, basis)?;
            current = step.reduced.clone();
            chain.push(step);
        }
    }

    /// `sum_i z_i dp_i/dz_i`. The flow scales `dz_1/z_1 ^ ... ^ dz_n/z_n` by
    /// this factor, so a complete field always has zero divergence.
    pub fn divergence(&self) -> LaurentPoly {
        self.ps
            .iter()
            .enumerate()
            .fold(LaurentPoly::zero(self.dim), |acc, (i, p)| {
                acc.add(&p.euler_derivative(i).expect("axis < dim"))
                    .expect("same dimension")
            })
    }

    /// Transports the field through the monomial automorphism `zeta = z^A`,
    /// i.e. `zeta_i = prod_j z_j^{A_ij}`, where `det A = ±1`.
    ///
    /// Since `zeta_i'/zeta_i = sum_j A_ij z_j'/z_j`, the new field is
    /// `p'_i(zeta) = sum_j A_ij p_j(zeta^{A^-1})`.
    pub fn pushforward(&self, matrix: &[Vec<i64>]) -> Result<VectorField> {
        let n = self.dim;
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::MatrixShape { dim: n });
        }
        let det = determinant(matrix)?;
        if det.abs() != 1 {
            return Err(Error::NotUnimodular(det));
        }
        let inverse = unimodular_inverse(matrix)?;
        // z_j = zeta^{B_j}, with B = A^-1.
        let images: Vec<Exponent> = inverse.into_iter().map(Exponent::new).collect();
        let substituted: Vec<LaurentPoly> = self
            .ps
            .iter()
            .map(|p| p.substitute_monomials(&images, n))
            .collect::<Result<_>>()?;
        let ps = matrix
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&substituted)
                    .try_fold(LaurentPoly::zero(n), |acc, (&a, p)| {
                        acc.add(&p.scale_int(a))
                    })
            })
            .collect::<Result<_>>()?;
        VectorField::with_dim(n, ps)
    }

    /// Extracts the planar canonical data `(a1, a2, f, c1, c2)` with
    /// `p1 = a2 f(W) + c1`, `p2 = -(a1 f(W) + c2)`, `W = z1^a1 z2^a2`.
    pub fn canonical2(&self) -> Result<Form2> {
        if self.dim != 2 {
            return Err(Error::NotPlanar(self.dim));
        }
        if self.decide_complete()?.verdict != Verdict::Complete {
            return Err(Error::NotComplete);
        }
        let basis = self.lattice_basis()?;
        let form = match basis.rank() {
            0 => Form2 {
                a1: 0,
                a2: 0,
                f: LaurentPoly::zero(1),
                c1: self.ps[0].constant_term(),
                c2: -self.ps[1].constant_term(),
            },
            1 => {
                let step = ReductionStep::from_basis(self, basis)?;
                let gen = step.basis.rows()[0].entries();
                let (a1, a2) = (gen[0], gen[1]);
                let (f1, f2) = (&step.f_list[0], &step.f_list[1]);
                let c1 = f1.constant_term();
                let c2 = -f2.constant_term();
                let f = if a2 != 0 {
                    f1.sub(&LaurentPoly::constant(1, c1.clone()))?
                        .scale(&GaussianRational::from_integer(1).checked_div(&a2.into())?)
                } else {
                    // a1 f1 is the constant reduced field, so f1 = c1 and f
                    // must come from f2.
                    f2.add(&LaurentPoly::constant(1, c2.clone()))?
                        .scale(&GaussianRational::from_integer(-1).checked_div(&a1.into())?)
                };
                Form2 { a1, a2, f, c1, c2 }
            }
            r => unreachable!("a complete planar field has lattice rank <= 1, got {r}"),
        };
        let rebuilt = form.to_field()?;
        assert_eq!(
            &rebuilt, self,
            "canonical form does not reproduce the field"
        );
        Ok(form)
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = crate::text::default_vars("z", self.dim);
        for (i, p) in self.ps.iter().enumerate() {
            writeln!(
                f,
                "d{0}/dt = {0} * ({1})",
                names[i],
                crate::text::format_poly(p, &names)
            )?;
        }
        Ok(())
    }
}

/// One application of the lattice reduction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReductionStep {
    pub dim_before: usize,
    /// Rows `a_j` with `W_j = Z^{a_j}`.
    pub basis: LatticeBasis,
    /// `f_list[i](W) = p_i(Z)`, one per coordinate of the parent field.
    pub f_list: Vec<LaurentPoly>,
    /// `reduced.ps[j] = sum_i a_ji f_list[i]`.
    pub reduced: VectorField,
}

impl ReductionStep {
    fn from_basis(field: &VectorField, basis: LatticeBasis) -> Result<ReductionStep> {
        let m = basis.rank();
        if m == field.dim {
            return Err(Error::FullRank(m));
        }
        if m == 0 {
            return Err(Error::ConstantField);
        }
        let mut coords = BTreeMap::new();
        for alpha in field.exponent_lattice().generators() {
            let k = basis
                .coordinates(alpha)
                .unwrap_or_else(|e| panic!("support exponent outside its own lattice: {e}"));
            coords.insert(alpha.clone(), k);
        }
        let f_list: Vec<LaurentPoly> = field
            .ps
            .iter()
            .map(|p| p.rewrite_in_basis(m, &coords))
            .collect::<Result<_>>()?;
        let reduced = VectorField::with_dim(m, reduced_polys(&basis, &f_list)?)?;
        Ok(ReductionStep {
            dim_before: field.dim,
            basis,
            f_list,
            reduced,
        })
    }

    /// Checks both exact identities of the step against `parent`.
    pub fn replays_on(&self, parent: &VectorField) -> bool {
        self.check(parent).unwrap_or(false)
    }

    fn check(&self, parent: &VectorField) -> Result<bool> {
        let m = self.basis.rank();
        if self.dim_before != parent.dim
            || self.basis.dim() != parent.dim
            || m >= parent.dim
            || m == 0
            || self.reduced.dim != m
            || self.f_list.len() != parent.dim
            || self.f_list.iter().any(|f| f.dim() != m)
        {
            return Ok(false);
        }
        // The rows must be independent, otherwise W does not cover the
        // reduced torus.
        let span = hnf_basis(&GeneratorSet::new(parent.dim, self.basis.rows().to_vec())?)?;
        if span.rank() != m {
            return Ok(false);
        }
        for (f, p) in self.f_list.iter().zip(&parent.ps) {
            if f.substitute_monomials(self.basis.rows(), parent.dim)? != *p {
                return Ok(false);
            }
        }
        Ok(reduced_polys(&self.basis, &self.f_list)? == self.reduced.ps)
    }
}

/// `sum_i a_ji f_i` for every basis row `a_j`.
fn reduced_polys(basis: &LatticeBasis, f_list: &[LaurentPoly]) -> Result<Vec<LaurentPoly>> {
    let m = basis.rank();
    basis
        .rows()
        .iter()
        .map(|row| {
            row.entries()
                .iter()
                .zip(f_list)
                .try_fold(LaurentPoly::zero(m), |acc, (&a, f)| {
                    acc.add(&f.scale_int(a))
                })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Complete,
    Incomplete,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Complete => "complete",
            Verdict::Incomplete => "incomplete",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Terminal {
    /// Every `p_i` of the last field is constant.
    BaseConstant,
    /// The exponent lattice of the last field has full rank.
    RankEqualsDim,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CompletenessCertificate {
    pub verdict: Verdict,
    pub chain: Vec<ReductionStep>,
    pub terminal: Terminal,
}

impl CompletenessCertificate {
    pub fn is_complete(&self) -> bool {
        self.verdict == Verdict::Complete
    }

    /// The field at the end of the chain, starting from `field`.
    pub fn last_field<'a>(&'a self, field: &'a VectorField) -> &'a VectorField {
        self.chain.last().map_or(field, |s| &s.reduced)
    }

    /// Replays the certificate against `field` with exact arithmetic.
    pub fn verify(&self, field: &VectorField) -> bool {
        let expected = match self.terminal {
            Terminal::BaseConstant => Verdict::Complete,
            Terminal::RankEqualsDim => Verdict::Incomplete,
        };
        if self.verdict != expected {
            return false;
        }
        let mut current = field;
        for step in &self.chain {
            if !step.replays_on(current) {
                return false;
            }
            current = &step.reduced;
        }
        match self.terminal {
            Terminal::BaseConstant => current.is_constant(),
            Terminal::RankEqualsDim => {
                !current.is_constant()
                    && current
                        .lattice_basis()
                        .is_ok_and(|b| b.rank() == current.dim)
            }
        }
    }
}

/// Planar canonical data: `p1 = a2 f(W) + c1`, `p2 = -(a1 f(W) + c2)` with
/// `W = z1^a1 z2^a2`. Every such field is complete.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Form2 {
    pub a1: i64,
    pub a2: i64,
    /// Laurent polynomial in one variable `w`.
    pub f: LaurentPoly,
    pub c1: GaussianRational,
    pub c2: GaussianRational,
}

impl Form2 {
    /// The planar field described by this data.
    pub fn to_field(&self) -> Result<VectorField> {
        if self.f.dim() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: self.f.dim(),
            });
        }
        let fw = self
            .f
            .substitute_monomials(&[Exponent::from([self.a1, self.a2])], 2)?;
        let p1 = fw
            .scale_int(self.a2)
            .add(&LaurentPoly::constant(2, self.c1.clone()))?;
        let p2 = fw
            .scale_int(self.a1)
            .add(&LaurentPoly::constant(2, self.c2.clone()))?
            .neg();
        VectorField::new(vec![p1, p2])
    }

    /// The rate `K` in `dW/dt = K W` along every integral curve, obtained by
    /// applying the reduction to the canonical form:
    /// `a1 (a2 f + c1) - a2 (a1 f + c2) = a1 c1 - a2 c2`.
    pub fn invariant_rate(&self) -> GaussianRational {
        &self.c1.mul_int(self.a1) - &self.c2.mul_int(self.a2)
    }

    /// Whether `canonical2` would return exactly this data for its own field:
    /// `f = 0` with `a = (0, 0)`, or `f` without constant term whose exponents
    /// have gcd 1 and `a` with positive leading entry.
    pub fn is_normalized(&self) -> bool {
        if self.f.is_zero() {
            return self.a1 == 0 && self.a2 == 0;
        }
        let gcd = self
            .f
            .terms()
            .fold(0i64, |g, (e, _)| num_integer::gcd(g, e.entries()[0]));
        let leading_positive = self.a1 > 0 || self.a1 == 0 && self.a2 > 0;
        self.f.constant_term().is_zero() && gcd == 1 && leading_positive
    }
}

impl fmt::Display for Form2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "a1 = {}", self.a1)?;
        writeln!(f, "a2 = {}", self.a2)?;
        writeln!(
            f,
            "f = {}",
            crate::text::format_poly(&self.f, &["w".to_string()])
        )?;
        writeln!(f, "c1 = {}", self.c1)?;
        writeln!(f, "c2 = {}", self.c2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{default_vars, parse_poly};

    fn field(ps: &[&str]) -> VectorField {
        let vars = default_vars("z", ps.len());
        VectorField::new(ps.iter().map(|s| parse_poly(s, &vars).unwrap()).collect()).unwrap()
    }

    fn w(s: &str) -> LaurentPoly {
        parse_poly(s, &["w".to_string()]).unwrap()
    }

    fn g(n: i64) -> GaussianRational {
        GaussianRational::from_integer(n)
    }

    #[test]
    fn new_checks_dimensions() {
        assert!(VectorField::new(vec![]).is_err());
        assert!(VectorField::new(vec![LaurentPoly::one(1), LaurentPoly::one(2)]).is_err());
    }

    #[test]
    fn exponent_lattice_examples() {
        let v = field(&["0", "-z1"]);
        assert_eq!(v.exponent_lattice().generators(), &[Exponent::from([1, 0])]);
        let v = field(&["3", "2i"]);
        assert_eq!(v.exponent_lattice().generators(), &[Exponent::from([0, 0])]);
        assert_eq!(v.lattice_basis().unwrap().rank(), 0);
        let v = field(&["z2", "z1"]);
        assert_eq!(
            v.exponent_lattice().generators(),
            &[Exponent::from([0, 1]), Exponent::from([1, 0])]
        );
        assert_eq!(v.lattice_basis().unwrap().rank(), 2);
    }

    #[test]
    fn reduce_examples() {
        let step = field(&["0", "-z1"]).reduce().unwrap();
        assert_eq!(step.basis.rows(), &[Exponent::from([1, 0])]);
        assert_eq!(step.f_list, vec![w("0"), w("-w")]);
        assert_eq!(step.reduced.ps(), &[w("0")]);

        let step = field(&["z1*z2 + 1", "-z1*z2 + 2"]).reduce().unwrap();
        assert_eq!(step.basis.rows(), &[Exponent::from([1, 1])]);
        assert_eq!(step.f_list, vec![w("w + 1"), w("-w + 2")]);
        assert_eq!(step.reduced.ps(), &[w("3")]);

        let step = field(&["z1*z2", "z1*z2"]).reduce().unwrap();
        assert_eq!(step.reduced.ps(), &[w("2*w")]);
    }

    #[test]
    fn reduce_rejects_full_rank_and_constant() {
        assert_eq!(
            field(&["z2", "z1"]).reduce().unwrap_err(),
            Error::FullRank(2)
        );
        assert_eq!(
            field(&["1", "2"]).reduce().unwrap_err(),
            Error::ConstantField
        );
    }

    #[test]
    fn decide_examples() {
        let c = field(&["0", "-z1"]).decide_complete().unwrap();
        assert_eq!(c.verdict, Verdict::Complete);
        assert_eq!(c.chain.len(), 1);
        assert_eq!(c.terminal, Terminal::BaseConstant);

        let c = field(&["z1"]).decide_complete().unwrap();
        assert_eq!(c.verdict, Verdict::Incomplete);
        assert_eq!(c.terminal, Terminal::RankEqualsDim);
        assert!(c.chain.is_empty());

        let c = field(&["z1*z2", "z1*z2"]).decide_complete().unwrap();
        assert_eq!(c.verdict, Verdict::Incomplete);
        assert_eq!(c.chain.len(), 1);
        assert_eq!(c.chain[0].reduced.ps(), &[w("2*w")]);

        let c = field(&["z1*z2", "-z1*z2"]).decide_complete().unwrap();
        assert_eq!(c.verdict, Verdict::Complete);
        assert_eq!(c.chain[0].reduced.ps(), &[w("0")]);

        let zero = VectorField::new(vec![LaurentPoly::zero(3); 3]).unwrap();
        let c = zero.decide_complete().unwrap();
        assert_eq!((c.verdict, c.chain.len()), (Verdict::Complete, 0));
    }

    #[test]
    fn two_level_chain() {
        // W = (z1, z2) gives the planar field (w1 w2, -w1 w2), which reduces again.
        let v = field(&["z1*z2", "-z1*z2", "z1^-1"]);
        let c = v.decide_complete().unwrap();
        assert!(c.verify(&v));
        assert_eq!(c.verdict, Verdict::Complete);
        assert_eq!(c.chain.len(), 2);
        assert_eq!(c.chain[1].reduced.ps(), &[w("0")]);
        for pair in c.chain.windows(2) {
            assert!(pair[1].dim_before < pair[0].dim_before);
        }
    }

    #[test]
    fn certificates_verify_and_detect_tampering() {
        let v = field(&["z1*z2 + 1", "-z1*z2 + 2"]);
        let cert = v.decide_complete().unwrap();
        assert!(cert.verify(&v));

        let mut bad = cert.clone();
        bad.chain[0].basis = LatticeBasis::from_hnf_rows(2, vec![Exponent::from([1, 2])]).unwrap();
        assert!(!bad.verify(&v));

        let mut bad = cert.clone();
        bad.verdict = Verdict::Incomplete;
        assert!(!bad.verify(&v));

        let inc = field(&["z1*z2", "z1*z2"]);
        let mut bad = inc.decide_complete().unwrap();
        bad.terminal = Terminal::BaseConstant;
        bad.verdict = Verdict::Complete;
        assert!(!bad.verify(&inc));

        // Certificate for another field.
        assert!(!cert.verify(&inc));
        // Empty chain claiming full rank on a reducible field.
        let fake = CompletenessCertificate {
            verdict: Verdict::Incomplete,
            chain: vec![],
            terminal: Terminal::RankEqualsDim,
        };
        assert!(!fake.verify(&v));
    }

    #[test]
    fn divergence_examples() {
        assert!(field(&["z1*z2 + 1", "-z1*z2 + 2"]).divergence().is_zero());
        let v = field(&["z2", "z1"]);
        assert!(v.divergence().is_zero());
        assert_eq!(v.decide_complete().unwrap().verdict, Verdict::Incomplete);
        assert_eq!(
            field(&["z1"]).divergence(),
            parse_poly("z1", &default_vars("z", 1)).unwrap()
        );
    }

    #[test]
    fn pushforward_examples() {
        let v = field(&["0", "-z1"]);
        let swapped = v.pushforward(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(swapped, field(&["-z2", "0"]));
        assert_eq!(v.pushforward(&[vec![1, 0], vec![0, 1]]).unwrap(), v);
        let sheared = v.pushforward(&[vec![1, 0], vec![1, 1]]).unwrap();
        assert_eq!(sheared, field(&["0", "-z1"]));
        assert_eq!(
            v.pushforward(&[vec![2, 0], vec![0, 1]]).unwrap_err(),
            Error::NotUnimodular(2)
        );
        assert_eq!(
            v.pushforward(&[vec![1, 0]]).unwrap_err(),
            Error::MatrixShape { dim: 2 }
        );
    }

    #[test]
    fn pushforward_inverse_round_trip() {
        let v = field(&["z1*z2^-1 + 3", "z1^2 - i*z2"]);
        let a = vec![vec![2, 1], vec![1, 1]];
        let back = unimodular_inverse(&a).unwrap();
        assert_eq!(v.pushforward(&a).unwrap().pushforward(&back).unwrap(), v);
    }

    #[test]
    fn canonical2_examples() {
        let form = field(&["z1*z2 + 1", "-z1*z2 + 2"]).canonical2().unwrap();
        assert_eq!(
            form,
            Form2 {
                a1: 1,
                a2: 1,
                f: w("w"),
                c1: g(1),
                c2: g(-2)
            }
        );

        // a2 = 0 branch: f is recovered from f2.
        let form = field(&["0", "-z1"]).canonical2().unwrap();
        assert_eq!(
            form,
            Form2 {
                a1: 1,
                a2: 0,
                f: w("w"),
                c1: g(0),
                c2: g(0)
            }
        );

        let form = field(&["3", "1/2i"]).canonical2().unwrap();
        assert_eq!(
            form,
            Form2 {
                a1: 0,
                a2: 0,
                f: w("0"),
                c1: g(3),
                c2: -crate::text::parse_coefficient("1/2i").unwrap()
            }
        );
    }

    #[test]
    fn canonical2_errors() {
        assert_eq!(
            field(&["z1"]).canonical2().unwrap_err(),
            Error::NotPlanar(1)
        );
        assert_eq!(
            field(&["z1*z2", "z1*z2"]).canonical2().unwrap_err(),
            Error::NotComplete
        );
        assert_eq!(
            field(&["z2", "z1"]).canonical2().unwrap_err(),
            Error::NotComplete
        );
    }

    #[test]
    fn from_form2_examples() {
        let s = Form2 {
            a1: 1,
            a2: 1,
            f: w("w"),
            c1: g(0),
            c2: g(0),
        };
        assert_eq!(s.to_field().unwrap(), field(&["z1*z2", "-z1*z2"]));
        let s = Form2 {
            a1: 3,
            a2: -1,
            f: w("0"),
            c1: g(2),
            c2: g(5),
        };
        assert_eq!(s.to_field().unwrap(), field(&["2", "-5"]));
        let s = Form2 {
            a1: 1,
            a2: 1,
            f: w("w"),
            c1: g(1),
            c2: g(-2),
        };
        assert_eq!(s.to_field().unwrap(), field(&["z1*z2 + 1", "-z1*z2 + 2"]));
    }

    #[test]
    fn invariant_rate_matches_reduction() {
        let s = Form2 {
            a1: 1,
            a2: 1,
            f: w("w"),
            c1: g(1),
            c2: g(-2),
        };
        let step = s.to_field().unwrap().reduce().unwrap();
        assert_eq!(
            step.reduced.ps()[0],
            LaurentPoly::constant(1, s.invariant_rate())
        );
        assert_eq!(s.invariant_rate(), g(3));
    }

    #[test]
    fn non_normalized_form_round_trip() {
        // a with negative leading entry and f with a constant and gcd-2 exponents.
        let s = Form2 {
            a1: -1,
            a2: 2,
            f: w("w^2 + 5 - 3*w^-4"),
            c1: g(1),
            c2: g(0),
        };
        assert!(!s.is_normalized());
        let v = s.to_field().unwrap();
        let canon = v.canonical2().unwrap();
        assert!(canon.is_normalized());
        assert_eq!(canon.to_field().unwrap(), v);
        assert_eq!((canon.a1, canon.a2), (2, -4));
    }
}
