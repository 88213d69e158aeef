//! Time-`t` flows of vector fields on the torus.
//!
//! [`ExactFlow`] covers fields whose reduction chain has at most one step and
//! ends in constants. Along such a flow every basis monomial evolves as
//! `W_j(t) = W_j(0) e^{K_j t}`, so `z_i'/z_i = f_i(W(t))` is a finite sum of
//! exponentials in `t` that integrates in closed form.
//!
//! [`integrate_numeric`] handles everything else with an adaptive
//! Dormand-Prince 5(4) pair applied to `u = log z` along a straight ray in the
//! complex time plane.

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::{ReductionStep, VectorField};
use crate::gaussian::GaussianRational;
use crate::laurent::{monomial_value, Exponent};

/// `|Re u_i|` above this means `z_i` is about to leave double range.
pub const ESCAPE_GUARD: f64 = 700.0;
/// A proposed step below `STEP_FLOOR * |t|` is read as a singularity.
pub const STEP_FLOOR: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for NumericOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-9,
            atol: 1e-12,
            max_steps: 5_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FlowStatus {
    Ok,
    /// The step size collapsed at `t_star`.
    Blowup {
        t_star: Complex64,
    },
    /// Some `|log z_i|` passed the escape guard at `t_star`, or the step
    /// budget ran out there.
    Escape {
        t_star: Complex64,
    },
}

impl FlowStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, FlowStatus::Ok)
    }

    pub fn t_star(&self) -> Option<Complex64> {
        match *self {
            FlowStatus::Ok => None,
            FlowStatus::Blowup { t_star } | FlowStatus::Escape { t_star } => Some(t_star),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FlowStats {
    pub steps: usize,
    pub rejected: usize,
    pub min_step: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowResult {
    pub status: FlowStatus,
    /// Present exactly when the status is `Ok`.
    pub endpoint: Option<Vec<Complex64>>,
    pub stats: FlowStats,
}

fn check_point(dim: usize, z0: &[Complex64]) -> Result<()> {
    if z0.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: z0.len(),
        });
    }
    if let Some(index) = z0.iter().position(|z| z.is_zero() || !z.is_finite()) {
        return Err(Error::ZeroCoordinate { index });
    }
    Ok(())
}

// Dormand-Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// `u + h * sum_k c_k k_k`.
fn lincomb(u: &[Complex64], h: f64, parts: &[(f64, &[Complex64])]) -> Vec<Complex64> {
    let mut out = u.to_vec();
    for (c, k) in parts {
        for (o, v) in out.iter_mut().zip(k.iter()) {
            *o += *v * (h * c);
        }
    }
    out
}

/// Integrates the field from `z0` along the segment `[0, t]` of the complex
/// time plane, in logarithmic coordinates `u_i = log z_i`.
pub fn integrate_numeric(
    field: &VectorField,
    z0: &[Complex64],
    t: Complex64,
    opts: NumericOptions,
) -> Result<FlowResult> {
    let valid = |x: f64| x.is_finite() && x > 0.0;
    if !valid(opts.rtol) || !valid(opts.atol) {
        return Err(Error::InvalidTolerance);
    }
    check_point(field.dim(), z0)?;
    let n = field.dim();
    let length = t.norm();
    let mut stats = FlowStats {
        min_step: f64::INFINITY,
        ..FlowStats::default()
    };
    if length == 0.0 {
        stats.min_step = 0.0;
        return Ok(FlowResult {
            status: FlowStatus::Ok,
            endpoint: Some(z0.to_vec()),
            stats,
        });
    }
    let dir = t / length;
    let rhs = |u: &[Complex64]| -> Vec<Complex64> {
        let z: Vec<Complex64> = u.iter().map(|x| x.exp()).collect();
        field
            .ps()
            .iter()
            .map(|p| match p.eval(&z) {
                Ok(v) => v * dir,
                Err(_) => Complex64::new(f64::NAN, f64::NAN),
            })
            .collect()
    };
    let norm = |e: &[Complex64], a: &[Complex64], b: &[Complex64]| -> f64 {
        let s: f64 = e
            .iter()
            .zip(a.iter().zip(b))
            .map(|(e, (a, b))| {
                let sc = opts.atol + opts.rtol * a.norm().max(b.norm());
                (e.norm() / sc).powi(2)
            })
            .sum();
        (s / n as f64).sqrt()
    };

    let mut u: Vec<Complex64> = z0.iter().map(|z| z.ln()).collect();
    let mut k1 = rhs(&u);
    let mut h = initial_step(&u, &k1, length, &rhs, &norm);
    let floor = STEP_FLOOR * length;
    let mut tau = 0.0;
    let mut err_old: f64 = 1e-4;
    let mut last_rejected = false;

    const SAFETY: f64 = 0.9;
    const BETA: f64 = 0.04;
    const EXPO: f64 = 0.2 - BETA * 0.75;

    loop {
        let remaining = length - tau;
        if remaining <= length * f64::EPSILON {
            break;
        }
        if h < floor {
            let status = FlowStatus::Blowup { t_star: dir * tau };
            return Ok(FlowResult {
                status,
                endpoint: None,
                stats,
            });
        }
        if stats.steps + stats.rejected >= opts.max_steps {
            let status = FlowStatus::Escape { t_star: dir * tau };
            return Ok(FlowResult {
                status,
                endpoint: None,
                stats,
            });
        }
        let hs = h.min(remaining);

        let k2 = rhs(&lincomb(&u, hs, &[(A21, &k1)]));
        let k3 = rhs(&lincomb(&u, hs, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(&lincomb(&u, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = rhs(&lincomb(
            &u,
            hs,
            &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)],
        ));
        let k6 = rhs(&lincomb(
            &u,
            hs,
            &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
        ));
        let u_new = lincomb(
            &u,
            hs,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        );
        let k7 = rhs(&u_new);
        let e = lincomb(
            &vec![Complex64::zero(); n],
            hs,
            &[
                (E1, &k1),
                (E3, &k3),
                (E4, &k4),
                (E5, &k5),
                (E6, &k6),
                (E7, &k7),
            ],
        );
        let mut err = norm(&e, &u, &u_new);
        if !err.is_finite() {
            err = f64::INFINITY;
        }

        let fac11 = err.powf(EXPO);
        if err <= 1.0 {
            // accept
            let fac = (fac11 / err_old.powf(BETA) / SAFETY).clamp(0.1, 5.0);
            let mut h_new = hs / fac;
            if last_rejected {
                h_new = h_new.min(hs);
            }
            err_old = err.max(1e-4);
            tau += hs;
            u = u_new;
            k1 = k7;
            stats.steps += 1;
            stats.min_step = stats.min_step.min(hs);
            last_rejected = false;
            h = h_new;
            if u.iter().any(|x| x.re.abs() > ESCAPE_GUARD) {
                let status = FlowStatus::Escape { t_star: dir * tau };
                return Ok(FlowResult {
                    status,
                    endpoint: None,
                    stats,
                });
            }
        } else {
            stats.rejected += 1;
            last_rejected = true;
            h = hs / (fac11 / SAFETY).clamp(1.0, 5.0);
        }
    }
    let endpoint = u.iter().map(|x| x.exp()).collect();
    Ok(FlowResult {
        status: FlowStatus::Ok,
        endpoint: Some(endpoint),
        stats,
    })
}

/// Starting step from the size of the solution and its first two
/// derivatives.
fn initial_step<F, N>(u: &[Complex64], f0: &[Complex64], length: f64, rhs: &F, norm: &N) -> f64
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
    N: Fn(&[Complex64], &[Complex64], &[Complex64]) -> f64,
{
    let d0 = norm(u, u, u);
    let d1 = norm(f0, u, u);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 || !d1.is_finite() {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let h0 = h0.min(length);
    let u1 = lincomb(u, h0, &[(1.0, f0)]);
    let f1 = rhs(&u1);
    let diff: Vec<Complex64> = f1.iter().zip(f0).map(|(a, b)| (a - b) / h0).collect();
    let d2 = norm(&diff, u, u);
    let h1 = if !d2.is_finite() {
        h0 * 1e-3
    } else if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(length)
}

/// One integrand term `coeff * Z^exponent`, which along the flow is
/// `coeff * z0^exponent * e^{rate t}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowTerm {
    pub coeff: GaussianRational,
    /// Exponent in the original coordinates.
    pub exponent: Exponent,
    /// Exponent in the basis monomials `W`.
    pub w_exponent: Exponent,
    /// `<w_exponent, K>`, exact.
    pub rate: GaussianRational,
}

impl FlowTerm {
    /// Integrates to `coeff * z0^exponent * t` instead of an exponential.
    pub fn is_resonant(&self) -> bool {
        self.rate.is_zero()
    }
}

/// Closed-form flow of a complete field with a reduction chain of length at
/// most one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactFlow {
    field: VectorField,
    step: Option<ReductionStep>,
    rates: Vec<GaussianRational>,
    integrands: Vec<Vec<FlowTerm>>,
}

impl ExactFlow {
    pub fn build(field: &VectorField) -> Result<ExactFlow> {
        let cert = field.decide_complete()?;
        if !cert.is_complete() {
            return Err(Error::NotComplete);
        }
        let n = field.dim();
        match cert.chain.len() {
            0 => {
                let integrands = field
                    .ps()
                    .iter()
                    .map(|p| {
                        let c = p.constant_term();
                        if c.is_zero() {
                            return Vec::new();
                        }
                        vec![FlowTerm {
                            coeff: c,
                            exponent: Exponent::zeros(n),
                            w_exponent: Exponent::zeros(0),
                            rate: GaussianRational::zero(),
                        }]
                    })
                    .collect();
                Ok(ExactFlow {
                    field: field.clone(),
                    step: None,
                    rates: Vec::new(),
                    integrands,
                })
            }
            1 => {
                let step = cert.chain.into_iter().next().expect("one step");
                let rates: Vec<GaussianRational> = step
                    .reduced
                    .ps()
                    .iter()
                    .map(|p| p.constant_term())
                    .collect();
                let mut integrands = Vec::with_capacity(n);
                for f in &step.f_list {
                    let mut terms = Vec::with_capacity(f.len());
                    for (k, c) in f.terms() {
                        let mut exponent = Exponent::zeros(n);
                        let mut rate = GaussianRational::zero();
                        for ((kj, row), kappa) in
                            k.entries().iter().zip(step.basis.rows()).zip(&rates)
                        {
                            exponent = exponent.checked_add(&row.checked_scale(*kj)?)?;
                            rate += &kappa.mul_int(*kj);
                        }
                        terms.push(FlowTerm {
                            coeff: c.clone(),
                            exponent,
                            w_exponent: k.clone(),
                            rate,
                        });
                    }
                    integrands.push(terms);
                }
                Ok(ExactFlow {
                    field: field.clone(),
                    step: Some(step),
                    rates,
                    integrands,
                })
            }
            len => Err(Error::ChainTooDeep(len)),
        }
    }

    pub fn field(&self) -> &VectorField {
        &self.field
    }

    pub fn step(&self) -> Option<&ReductionStep> {
        self.step.as_ref()
    }

    /// The exact rates `K_j` with `W_j(t) = W_j(0) e^{K_j t}`.
    pub fn rates(&self) -> &[GaussianRational] {
        &self.rates
    }

    /// Integrand terms of `z_i'/z_i` for each coordinate.
    pub fn integrands(&self) -> &[Vec<FlowTerm>] {
        &self.integrands
    }

    /// `log(z_i(t) / z0_i)` for each coordinate.
    pub fn log_ratio(&self, z0: &[Complex64], t: Complex64) -> Result<Vec<Complex64>> {
        check_point(self.field.dim(), z0)?;
        Ok(self
            .integrands
            .iter()
            .map(|terms| {
                terms
                    .iter()
                    .map(|term| {
                        let scale = term.coeff.to_complex64() * monomial_value(&term.exponent, z0);
                        scale * exp_integral(term.rate.to_complex64(), t)
                    })
                    .sum()
            })
            .collect())
    }

    /// The point reached from `z0` at complex time `t`.
    pub fn eval(&self, z0: &[Complex64], t: Complex64) -> Result<Vec<Complex64>> {
        let logs = self.log_ratio(z0, t)?;
        Ok(z0.iter().zip(logs).map(|(z, l)| z * l.exp()).collect())
    }

    /// Largest componentwise relative deviation between `phi_s(phi_t(z0))`
    /// and `phi_{s+t}(z0)`.
    pub fn group_law_residual(&self, z0: &[Complex64], s: Complex64, t: Complex64) -> Result<f64> {
        let composed = self.eval(&self.eval(z0, t)?, s)?;
        let direct = self.eval(z0, s + t)?;
        Ok(max_relative(&composed, &direct))
    }

    /// Largest relative deviation of `W_j(phi_t(z0))` from
    /// `W_j(z0) e^{K_j t}`; zero when there are no basis monomials.
    pub fn invariant_monomial_residual(&self, z0: &[Complex64], t: Complex64) -> Result<f64> {
        let Some(step) = &self.step else {
            check_point(self.field.dim(), z0)?;
            return Ok(0.0);
        };
        let z = self.eval(z0, t)?;
        let (now, expected): (Vec<_>, Vec<_>) = step
            .basis
            .rows()
            .iter()
            .zip(&self.rates)
            .map(|(row, k)| {
                (
                    monomial_value(row, &z),
                    monomial_value(row, z0) * (k.to_complex64() * t).exp(),
                )
            })
            .unzip();
        Ok(max_relative(&now, &expected))
    }
}

/// `int_0^t e^{rate s} ds`, accurate for small `rate * t`.
fn exp_integral(rate: Complex64, t: Complex64) -> Complex64 {
    if rate.is_zero() {
        return t;
    }
    let x = rate * t;
    if x.norm() < 1e-4 {
        // t * (e^x - 1)/x by its Taylor series
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 2..8 {
            term = term * x / k as f64;
            sum += term;
        }
        t * sum
    } else {
        (x.exp() - 1.0) / rate
    }
}

pub(crate) fn max_relative(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm() / y.norm())
        .fold(0.0, f64::max)
}
