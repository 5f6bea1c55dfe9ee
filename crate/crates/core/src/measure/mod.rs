//! Univariate Mahler measure: root products (Jensen) and direct quadrature
//! of `∫ log|f(e^{2πit})| dt` as an independent check.

mod aberth;
mod quadrature;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{dense, ScaledPoly, UnivariateIntPoly};
use aberth::SparseF64;

pub use quadrature::{mahler_quadrature, quadrature_report, QuadratureReport};

/// Default root-refinement tolerance (relative Newton step).
pub const DEFAULT_TOL: f64 = 1e-12;
/// Default grid size for [`mahler_quadrature`].
pub const DEFAULT_QUADRATURE_POINTS: usize = 1 << 16;
/// Above this (deflated) degree root finding is refused.
pub const ROOT_DEGREE_LIMIT: u64 = 10_000;
const MAX_ITERATIONS: usize = 2_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Roots,
    Quadrature,
    Qmc,
    BoydLawton,
}

/// A logarithmic Mahler measure `m` (nats) with the method that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureEstimate {
    pub log_value: f64,
    pub method: Method,
    pub error_bound: f64,
}

impl MeasureEstimate {
    pub fn exact(log_value: f64, method: Method) -> Self {
        Self {
            log_value,
            method,
            error_bound: 0.0,
        }
    }

    /// The classical measure `M = exp(m)`.
    pub fn measure(&self) -> f64 {
        self.log_value.exp()
    }

    fn plus(self, other: Self) -> Self {
        Self {
            log_value: self.log_value + other.log_value,
            method: self.method,
            error_bound: self.error_bound + other.error_bound,
        }
    }
}

/// All complex roots of a polynomial with nonzero constant term.
#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    pub leading_coefficient: BigInt,
    /// Largest backward error `|f(α)| / Σ|a_i||α|^{n_i}` over the roots.
    pub residual_bound: f64,
}

pub fn find_roots(f: &UnivariateIntPoly, tol: f64) -> Result<RootSet> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("find_roots"));
    }
    if f.constant_term() == BigInt::default() {
        return Err(Error::InvalidArgument(
            "f(0) = 0; strip the z^j factor first".into(),
        ));
    }
    let lead = f.leading_coefficient().unwrap().clone();
    let d = f.exponent_gcd();
    if d == 0 {
        return Ok(RootSet {
            roots: Vec::new(),
            leading_coefficient: lead,
            residual_bound: 0.0,
        });
    }
    let g = f.deflate(d);
    let out = solve(&g, tol)?;
    let residual_bound = out.backward_errors.iter().copied().fold(0.0, f64::max);
    let roots = if d == 1 {
        out.roots
    } else {
        let mut all = Vec::with_capacity(out.roots.len() * d as usize);
        for beta in out.roots {
            let (r, th) = beta.to_polar();
            let r = r.powf(1.0 / d as f64);
            for k in 0..d {
                let phi = (th + std::f64::consts::TAU * k as f64) / d as f64;
                all.push(Complex64::from_polar(r, phi));
            }
        }
        all
    };
    Ok(RootSet {
        roots,
        leading_coefficient: lead,
        residual_bound,
    })
}

fn to_sparse_f64(g: &UnivariateIntPoly) -> Result<SparseF64> {
    let terms = g.coeffs_f64();
    if terms.iter().any(|(_, c)| !c.is_finite()) {
        return Err(Error::InvalidArgument(
            "coefficients exceed floating-point range".into(),
        ));
    }
    Ok(SparseF64::new(terms))
}

fn solve(g: &UnivariateIntPoly, tol: f64) -> Result<aberth::AberthOutcome> {
    let deg = g.degree().unwrap_or(0);
    if deg > ROOT_DEGREE_LIMIT {
        return Err(Error::InvalidArgument(format!(
            "degree {deg} exceeds the root-finding limit {ROOT_DEGREE_LIMIT}"
        )));
    }
    let sparse = to_sparse_f64(g)?;
    let out = sparse.solve(tol, MAX_ITERATIONS);
    if !out.converged {
        let best_residual = out.backward_errors.iter().copied().fold(0.0, f64::max);
        return Err(Error::NoConvergence {
            iterations: out.iterations,
            best_residual,
        });
    }
    Ok(out)
}

/// `m(f)` by the root product `log|lead| + Σ_{|α|>1} log|α|`.
///
/// Binomials are evaluated in closed form, `f(z) = g(z^d)` is reduced to
/// `g`, and polynomials whose deflated degree exceeds [`ROOT_DEGREE_LIMIT`]
/// fall back to quadrature on a grid sized to the degree.
pub fn mahler_univariate(f: &UnivariateIntPoly) -> Result<MeasureEstimate> {
    mahler_univariate_with(f, DEFAULT_TOL)
}

pub fn mahler_univariate_with(f: &UnivariateIntPoly, tol: f64) -> Result<MeasureEstimate> {
    let (_, g) = f
        .strip_trivial()
        .map_err(|_| Error::ZeroPolynomial("mahler_univariate"))?;
    reduced_measure(&g, tol, 0)
}

/// `m(numerator) - log(denominator)`.
pub fn mahler_scaled(p: &ScaledPoly) -> Result<MeasureEstimate> {
    let mut m = mahler_univariate(&p.numerator)?;
    m.log_value -= big_ln(&BigInt::from(p.denominator.clone()));
    Ok(m)
}

/// Natural log of |x| for arbitrarily large integers.
pub(crate) fn big_ln(x: &BigInt) -> f64 {
    let mag = x.magnitude();
    let bits = mag.bits();
    if bits < 1000 {
        mag.to_f64().unwrap().ln()
    } else {
        let shift = bits - 60;
        let top = (mag >> shift).to_f64().unwrap();
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
}

fn reduced_measure(g: &UnivariateIntPoly, tol: f64, depth: usize) -> Result<MeasureEstimate> {
    let lead = g.leading_coefficient().expect("nonzero");
    match g.term_count() {
        1 => return Ok(MeasureEstimate::exact(big_ln(lead), Method::Roots)),
        2 => {
            let c = &g.terms()[1].1;
            let big = if c.magnitude() > lead.magnitude() {
                c
            } else {
                lead
            };
            return Ok(MeasureEstimate::exact(big_ln(big), Method::Roots));
        }
        _ => {}
    }
    let d = g.exponent_gcd();
    let g = if d > 1 { g.deflate(d) } else { g.clone() };
    let deg = g.degree().unwrap();
    if deg > ROOT_DEGREE_LIMIT {
        let points = (8 * deg as usize)
            .next_power_of_two()
            .max(DEFAULT_QUADRATURE_POINTS);
        return mahler_quadrature(&g, points);
    }
    let out = solve(&g, tol)?;
    let suspicious = out
        .roots
        .iter()
        .zip(&out.newton_steps)
        .any(|(z, s)| *s > 1e-9 * z.norm().max(1.0));
    if suspicious && depth < 64 && deg <= 4_000 {
        // Clustered roots usually mean repeated factors; split them off exactly.
        let dense_g = g.to_dense_ascending();
        let common = dense::gcd(&dense_g, &dense::derivative(&dense_g));
        if dense::degree(&common).unwrap_or(0) > 0 {
            let quotient = dense::exact_div(&dense_g, &common).expect("gcd divides");
            let a = UnivariateIntPoly::from_dense_ascending(&quotient);
            let b = UnivariateIntPoly::from_dense_ascending(&common);
            let ma = reduced_measure(&a, tol, depth + 1)?;
            let mb = reduced_measure(&b, tol, depth + 1)?;
            return Ok(ma.plus(mb));
        }
    }
    let mut log_value = big_ln(lead);
    let mut error_bound = 4.0 * f64::EPSILON * deg as f64;
    for (z, step) in out.roots.iter().zip(&out.newton_steps) {
        let r = z.norm();
        let rel = step / r.max(f64::MIN_POSITIVE);
        if r > 1.0 {
            log_value += r.ln();
        }
        if (r.ln()).abs() <= rel {
            error_bound += rel + r.ln().abs();
        } else if r > 1.0 {
            error_bound += rel;
        }
    }
    Ok(MeasureEstimate {
        log_value,
        method: Method::Roots,
        error_bound,
    })
}

/// `Σ_{|α|>1} log|α|` contributions are nonnegative, so a lower bound is
/// `log|lead|`; exposed for quick screening.
pub fn measure_lower_bound(f: &UnivariateIntPoly) -> f64 {
    let lead = f.leading_coefficient().map(|c| c.abs()).unwrap_or_default();
    let (_, g) = match f.strip_trivial() {
        Ok(x) => x,
        Err(_) => return f64::NEG_INFINITY,
    };
    big_ln(&lead).max(big_ln(&g.constant_term()))
}
