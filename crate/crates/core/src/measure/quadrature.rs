use num_complex::Complex64;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::{MeasureEstimate, Method};
use crate::error::{Error, Result};
use crate::poly::{mul_mod, unit_phase, UnivariateIntPoly};

const CHUNK: usize = 4096;
/// Relative size below which a grid value counts as an exact zero.
const ZERO_REL: f64 = 1e-11;
const MAX_ZERO_ORDER: u64 = 16;

/// Diagnostics of a uniform-grid evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureReport {
    pub estimate: MeasureEstimate,
    /// Grid points that were zeros of `f` (replaced by their singular correction).
    pub skipped: usize,
    pub points: usize,
}

#[derive(Clone, Copy, Default)]
struct Partial {
    full: f64,
    half: f64,
    zeros_full: usize,
    zeros_half: usize,
}

impl Partial {
    fn merge(self, o: Self) -> Self {
        Self {
            full: self.full + o.full,
            half: self.half + o.half,
            zeros_full: self.zeros_full + o.zeros_full,
            zeros_half: self.zeros_half + o.zeros_half,
        }
    }
}

/// Uniform-grid average of `log|f(e^{2πit})|` over `num_points` points.
///
/// Grid points where `f` vanishes are left out of the plain sum; in their
/// place the punctured-trapezoid correction `log|f^{(m)}(ζ)/m!| - m·log N`
/// for a zero of order `m` is added, which makes the rule exact for the
/// `log|2 sin πt|` singularity. `error_bound` is the difference between the
/// full grid and its even half.
pub fn mahler_quadrature(f: &UnivariateIntPoly, num_points: usize) -> Result<MeasureEstimate> {
    quadrature_report(f, num_points).map(|r| r.estimate)
}

pub fn quadrature_report(f: &UnivariateIntPoly, num_points: usize) -> Result<QuadratureReport> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("mahler_quadrature"));
    }
    if num_points < 16 || !num_points.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "num_points must be a power of two >= 16, got {num_points}"
        )));
    }
    let (_, g) = f.strip_trivial()?;
    let terms: Vec<(u64, f64)> = g.coeffs_f64();
    let length: f64 = terms.iter().map(|(_, c)| c.abs()).sum();
    if !length.is_finite() {
        return Err(Error::InvalidArgument(
            "coefficients exceed floating-point range".into(),
        ));
    }
    let n = num_points as u64;
    let ln_full = (num_points as f64).ln();
    let ln_half = (num_points as f64 / 2.0).ln();

    let chunks: Vec<Partial> = (0..num_points.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = Partial::default();
            let end = ((c + 1) * CHUNK).min(num_points);
            for j in (c * CHUNK) as u64..end as u64 {
                let v = eval_grid(&terms, j, n);
                let even = j % 2 == 0;
                if v.norm() > ZERO_REL * length {
                    let l = v.norm().ln();
                    acc.full += l;
                    if even {
                        acc.half += l;
                    }
                } else {
                    let (order, smooth) = zero_order(&terms, j, n, length);
                    acc.full += smooth - order as f64 * ln_full;
                    acc.zeros_full += 1;
                    if even {
                        acc.half += smooth - order as f64 * ln_half;
                        acc.zeros_half += 1;
                    }
                }
            }
            acc
        })
        .collect();
    let total = pairwise(&chunks);
    if total.zeros_full * 100 > num_points {
        return Err(Error::CircleZeroSaturation {
            skipped: total.zeros_full,
            total: num_points,
        });
    }
    let q_full = total.full / num_points as f64;
    let q_half = total.half / (num_points / 2) as f64;
    let lead = g
        .leading_coefficient()
        .unwrap()
        .to_f64()
        .unwrap_or(1.0)
        .abs();
    let floor = 1e-15 * (1.0 + lead.ln().abs());
    Ok(QuadratureReport {
        estimate: MeasureEstimate {
            log_value: q_full,
            method: Method::Quadrature,
            error_bound: (q_full - q_half).abs() + floor,
        },
        skipped: total.zeros_full,
        points: num_points,
    })
}

fn pairwise(parts: &[Partial]) -> Partial {
    match parts.len() {
        0 => Partial::default(),
        1 => parts[0],
        n => pairwise(&parts[..n / 2]).merge(pairwise(&parts[n / 2..])),
    }
}

fn eval_grid(terms: &[(u64, f64)], j: u64, n: u64) -> Complex64 {
    terms
        .iter()
        .map(|(e, c)| unit_phase(mul_mod(*e, j, n), n) * *c)
        .sum()
}

/// Order `m` of the zero at `ζ = e^{2πi j/n}` and `log|f^{(m)}(ζ)/m!|`.
fn zero_order(terms: &[(u64, f64)], j: u64, n: u64, length: f64) -> (u64, f64) {
    for m in 1..=MAX_ZERO_ORDER {
        let mut v = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for (e, c) in terms {
            if *e < m {
                continue;
            }
            let binom = binomial_f64(*e, m);
            v += unit_phase(mul_mod(e - m, j, n), n) * (*c * binom);
            scale += c.abs() * binom;
        }
        if v.norm() > ZERO_REL * scale.max(length) {
            return (m, v.norm().ln());
        }
    }
    (MAX_ZERO_ORDER, (ZERO_REL * length).ln())
}

fn binomial_f64(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
