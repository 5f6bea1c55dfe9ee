//! Mahler measure of Laurent polynomials in several variables: randomized
//! lattice quadrature over the torus, and one-variable restrictions along
//! `r_n = (1, n, …, n^{ℓ-1})` whose measures converge to it.

use std::fmt::Write as _;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{big_ln, mahler_univariate, MeasureEstimate, Method};
use crate::poly::{ExponentVector, MultiLaurentPoly, UnivariateIntPoly};

/// Degree cap for the default restriction grid.
pub const DEFAULT_MAX_RESTRICTED_DEGREE: u64 = 1_000_000;
pub const QMC_REPLICAS: usize = 16;
pub const MIN_QMC_BUDGET: usize = 1 << 10;

/// Threshold past which every `r_n` separates the support.
///
/// The threshold is the rational `numerator / denominator`; all integers
/// `n > threshold` are safe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SafeIndex {
    pub numerator: u128,
    pub denominator: u128,
    /// Difference vector attaining the maximum; empty when there is none.
    pub witness: Vec<i64>,
}

impl SafeIndex {
    pub fn threshold(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    /// Smallest integer strictly above the threshold.
    pub fn min_safe_n(&self) -> u64 {
        (self.numerator / self.denominator) as u64 + 1
    }
}

/// For each support difference `v` with last nonzero entry `v_j`, `j >= 2`,
/// the bound `Σ_{i<j} |v_i / v_j|`; the maximum over all differences.
pub fn safe_substitution_index(f: &MultiLaurentPoly) -> SafeIndex {
    let support = f.support();
    let mut best = SafeIndex {
        numerator: 0,
        denominator: 1,
        witness: Vec::new(),
    };
    for (a, ja) in support.iter().enumerate() {
        for jb in &support[a + 1..] {
            let v: Vec<i128> = ja
                .iter()
                .zip(jb.iter())
                .map(|(x, y)| *x as i128 - *y as i128)
                .collect();
            let Some(top) = v.iter().rposition(|x| *x != 0) else {
                continue;
            };
            let (num, den) = if top == 0 {
                (0u128, 1u128)
            } else {
                (
                    v[..top].iter().map(|x| x.unsigned_abs()).sum(),
                    v[top].unsigned_abs(),
                )
            };
            // num/den > best.num/best.den, compared without rounding
            let beats = num * best.denominator > best.numerator * den;
            if beats || best.witness.is_empty() {
                let g = num.gcd(&den).max(1);
                best = SafeIndex {
                    numerator: num / g,
                    denominator: den / g,
                    witness: v.iter().map(|x| *x as i64).collect(),
                };
            }
        }
    }
    best
}

/// `F(z, z^n, …, z^{n^{ℓ-1}})`, shifted to lowest exponent 0.
pub fn restrict(f: &MultiLaurentPoly, n: u64) -> Result<UnivariateIntPoly> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "restriction index n must be >= 1".into(),
        ));
    }
    let r = ExponentVector::geometric(n, f.num_vars())?;
    let g = f.substitute_powers(&r)?;
    if g.is_zero() {
        return Err(Error::VanishingRestriction { n });
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: u64,
    pub estimate: MeasureEstimate,
    pub height_preserved: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,m_estimate,error_bound,height_preserved\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{:.15e},{:.3e},{}",
                r.n, r.estimate.log_value, r.estimate.error_bound, r.height_preserved
            );
        }
        out
    }
}

/// Measures of the restrictions `F_{r_n}` for each `n` in `ns`.
pub fn boyd_lawton_sequence(f: &MultiLaurentPoly, ns: &[u64]) -> Result<ConvergenceTable> {
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "ns must be strictly increasing".into(),
        ));
    }
    if ns.first() == Some(&0) {
        return Err(Error::InvalidArgument("ns must be >= 1".into()));
    }
    let height = f.height();
    let rows = ns
        .par_iter()
        .map(|&n| {
            let g = restrict(f, n)?;
            let mut estimate = mahler_univariate(&g)?;
            estimate.method = Method::BoydLawton;
            Ok(ConvergenceRow {
                n,
                estimate,
                height_preserved: g.height() == height,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceTable { rows })
}

/// `{2, 3, 4, 6, 8, 12, …}` up to the largest `n` whose restriction has
/// degree at most `max_degree`.
pub fn default_ns(f: &MultiLaurentPoly, max_degree: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut base = 2u64;
    'outer: loop {
        for n in [base, 3 * base / 2] {
            if n < 2 || out.last() == Some(&n) {
                continue;
            }
            match restricted_degree(f, n) {
                Some(d) if d <= max_degree => out.push(n),
                _ => break 'outer,
            }
        }
        base = match base.checked_mul(2) {
            Some(b) => b,
            None => break,
        };
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn restricted_degree(f: &MultiLaurentPoly, n: u64) -> Option<u64> {
    let r = ExponentVector::geometric(n, f.num_vars()).ok()?;
    let images: Vec<i128> = f
        .support()
        .iter()
        .map(|j| {
            j.iter()
                .zip(&r.0)
                .map(|(a, b)| *a as i128 * *b as i128)
                .sum()
        })
        .collect();
    let (lo, hi) = (images.iter().min()?, images.iter().max()?);
    u64::try_from(hi - lo).ok()
}

/// When the support lies on a line `j_0 + t·v`, `F = z^{j_0} g(z^v)` and
/// `m(F) = m(g)` exactly.
fn collinear_reduction(f: &MultiLaurentPoly) -> Option<UnivariateIntPoly> {
    let support = f.support();
    let base = support[0];
    let diffs: Vec<Vec<i64>> = support
        .iter()
        .map(|j| j.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    let first = diffs.iter().find(|d| d.iter().any(|x| *x != 0))?;
    let g = first.iter().fold(0i64, |g, x| g.gcd(x));
    let dir: Vec<i64> = first.iter().map(|x| x / g).collect();
    let pivot = dir.iter().position(|x| *x != 0)?;
    let mut ts = Vec::with_capacity(diffs.len());
    for d in &diffs {
        let t = d[pivot] / dir[pivot];
        if d.iter().zip(&dir).any(|(x, v)| *x != t * v) {
            return None;
        }
        ts.push(t);
    }
    let min = *ts.iter().min()?;
    let terms = f
        .terms()
        .zip(ts)
        .map(|((_, c), t)| ((t - min) as u64, c.clone()));
    UnivariateIntPoly::from_terms(terms).ok()
}

/// Generating vector of a rank-1 lattice with `n` points in `dim`
/// dimensions, derived from the generalised golden ratio.
fn lattice_generator(n: u64, dim: usize) -> Vec<u64> {
    // phi_d is the positive root of x^{d+1} = x + 1
    let mut phi = 2.0f64;
    for _ in 0..64 {
        phi = (1.0 + phi).powf(1.0 / (dim as f64 + 1.0));
    }
    (0..dim)
        .map(|i| {
            let alpha = (1.0 / phi.powi(i as i32 + 1)).fract();
            let z = ((alpha * n as f64).round() as u64) | 1;
            z % n
        })
        .collect()
}

/// Randomly shifted rank-1 lattice estimate of `∫ log|F|` over the torus,
/// with `budget` points split evenly across [`QMC_REPLICAS`] shifts and
/// combined by the median of the replica means.
///
/// One-monomial and collinear supports are reduced to one variable and
/// evaluated there; the returned `method` says which route was taken.
pub fn mahler_qmc(f: &MultiLaurentPoly, budget: usize, seed: u64) -> Result<MeasureEstimate> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("mahler_qmc"));
    }
    if budget < MIN_QMC_BUDGET {
        return Err(Error::InvalidArgument(format!(
            "QMC budget must be at least {MIN_QMC_BUDGET}"
        )));
    }
    if f.term_count() == 1 {
        let c = f.terms().next().unwrap().1;
        return Ok(MeasureEstimate::exact(big_ln(c), Method::Qmc));
    }
    if let Some(g) = collinear_reduction(f) {
        return mahler_univariate(&g);
    }
    let per = (budget / QMC_REPLICAS).next_power_of_two() as u64;
    let per = if per as usize * QMC_REPLICAS > budget {
        per / 2
    } else {
        per
    };
    let dim = f.num_vars();
    let gen = lattice_generator(per, dim);
    let terms: Vec<(Vec<i64>, f64)> = f
        .terms()
        .map(|(j, c)| (j.clone(), c.to_f64().unwrap_or(f64::NAN)))
        .collect();
    let length: f64 = terms.iter().map(|(_, c)| c.abs()).sum();
    if !length.is_finite() {
        return Err(Error::InvalidArgument(
            "coefficients exceed floating-point range".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shifts: Vec<Vec<f64>> = (0..QMC_REPLICAS)
        .map(|_| (0..dim).map(|_| rng.random::<f64>()).collect())
        .collect();

    let replicas: Vec<(f64, usize)> = shifts
        .par_iter()
        .map(|shift| {
            let mut sum = 0.0;
            let mut zeros = 0usize;
            let mut point = vec![0.0; dim];
            for j in 0..per {
                for (d, p) in point.iter_mut().enumerate() {
                    let base = ((j as u128 * gen[d] as u128) % per as u128) as f64 / per as f64;
                    *p = (base + shift[d]).fract();
                }
                let v: Complex64 = terms
                    .iter()
                    .map(|(e, c)| {
                        let phase: f64 = e.iter().zip(&point).map(|(a, t)| *a as f64 * t).sum();
                        Complex64::from_polar(*c, std::f64::consts::TAU * phase.fract())
                    })
                    .sum();
                let a = v.norm();
                if a > 0.0 {
                    sum += a.ln();
                } else {
                    zeros += 1;
                }
            }
            let used = per as usize - zeros;
            (
                if used > 0 {
                    sum / used as f64
                } else {
                    f64::NEG_INFINITY
                },
                zeros,
            )
        })
        .collect();
    let zeros: usize = replicas.iter().map(|r| r.1).sum();
    let total = per as usize * QMC_REPLICAS;
    if zeros * 100 > total {
        return Err(Error::CircleZeroSaturation {
            skipped: zeros,
            total,
        });
    }
    let mut means: Vec<f64> = replicas.iter().map(|r| r.0).collect();
    let center = median(&mut means);
    let mut dev: Vec<f64> = means.iter().map(|m| (m - center).abs()).collect();
    let mad = median(&mut dev);
    let sigma = 1.4826 * mad;
    Ok(MeasureEstimate {
        log_value: center,
        method: Method::Qmc,
        error_bound: 3.0 * sigma / (QMC_REPLICAS as f64).sqrt(),
    })
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_x_y() -> MultiLaurentPoly {
        "1 + x1 + x2".parse().unwrap()
    }

    fn up(s: &str) -> UnivariateIntPoly {
        s.parse().unwrap()
    }

    #[test]
    fn safe_index_examples() {
        // differences of {(0,0),(1,0),(0,1)}: (1,0), (0,1), (1,-1); the last gives 1
        let s = safe_substitution_index(&one_x_y());
        assert_eq!((s.numerator, s.denominator), (1, 1));
        assert_eq!(s.min_safe_n(), 2);
        assert_eq!(
            s.witness.iter().map(|x| x.abs()).collect::<Vec<_>>(),
            vec![1, 1]
        );

        let s = safe_substitution_index(&"1 + x1".parse().unwrap());
        assert_eq!(s.threshold(), 0.0);

        let s = safe_substitution_index(&"3*x1^2*x2".parse().unwrap());
        assert_eq!(s.threshold(), 0.0);
        assert!(s.witness.is_empty());
    }

    #[test]
    fn unsafe_n_merges_monomials() {
        let g = restrict(&one_x_y(), 1).unwrap();
        assert_eq!(g, up("1 + 2*z"));
        assert_ne!(g.height(), one_x_y().height());
    }

    #[test]
    fn restrict_examples() {
        assert_eq!(restrict(&one_x_y(), 3).unwrap(), up("1 + z + z^3"));
        assert_eq!(restrict(&one_x_y(), 2).unwrap(), up("1 + z + z^2"));
        let f: MultiLaurentPoly = "x1*x2^-1 + 1".parse().unwrap();
        assert_eq!(restrict(&f, 2).unwrap(), up("1 + z"));
        let v: MultiLaurentPoly = "x1 - x2".parse().unwrap();
        assert!(matches!(
            restrict(&v, 1),
            Err(Error::VanishingRestriction { n: 1 })
        ));
        assert!(restrict(&one_x_y(), 0).is_err());
    }

    #[test]
    fn safe_index_threshold_is_sufficient() {
        let f: MultiLaurentPoly = "2*x1^3*x2^-1 - x1*x2^2 + 5*x3 + x1^-2*x2*x3^2 - 7"
            .parse()
            .unwrap();
        let s = safe_substitution_index(&f);
        for n in s.min_safe_n()..s.min_safe_n() + 40 {
            let g = restrict(&f, n).unwrap();
            assert_eq!(g.term_count(), f.term_count(), "n = {n}");
            assert_eq!(g.height(), f.height());
        }
    }

    #[test]
    fn sequence_examples() {
        let t = boyd_lawton_sequence(&one_x_y(), &[2]).unwrap();
        assert!(t.rows[0].estimate.log_value.abs() < 1e-9);
        assert_eq!(t.rows[0].estimate.method, Method::BoydLawton);

        // 1 + z + z^5 = (z^2 + z + 1)(z^3 - z^2 + 1)
        let prod = &up("z^2 + z + 1") * &up("z^3 - z^2 + 1");
        assert_eq!(prod, up("1 + z + z^5"));
        let cubic = mahler_univariate(&up("z^3 - z^2 + 1")).unwrap().log_value;
        let t = boyd_lawton_sequence(&one_x_y(), &[5]).unwrap();
        assert!((t.rows[0].estimate.log_value - cubic).abs() < 1e-10);
        assert!((cubic - 0.28119).abs() < 1e-5);

        assert!(boyd_lawton_sequence(&one_x_y(), &[3, 3]).is_err());
        assert!(boyd_lawton_sequence(&one_x_y(), &[0, 3]).is_err());
    }

    #[test]
    fn csv_columns() {
        let t = boyd_lawton_sequence(&one_x_y(), &[2, 3]).unwrap();
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next(),
            Some("n,m_estimate,error_bound,height_preserved")
        );
        assert!(lines.next().unwrap().starts_with("2,"));
        assert!(lines.next().unwrap().ends_with(",true"));
    }

    #[test]
    fn qmc_exact_cases() {
        let m = mahler_qmc(&"x1 + x2".parse().unwrap(), 1 << 12, 1).unwrap();
        assert!(m.log_value.abs() < 1e-12);
        let m = mahler_qmc(&"5".parse().unwrap(), 1 << 12, 1).unwrap();
        assert_eq!(m.log_value, 5f64.ln());
        assert!(mahler_qmc(&one_x_y(), 100, 1).is_err());
    }

    #[test]
    fn qmc_is_deterministic_and_thread_independent() {
        let f = one_x_y();
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let a = one.install(|| mahler_qmc(&f, 1 << 14, 9).unwrap());
        let b = four.install(|| mahler_qmc(&f, 1 << 14, 9).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn default_grid_respects_degree_cap() {
        let ns = default_ns(&one_x_y(), 1000);
        assert_eq!(&ns[..6], &[2, 3, 4, 6, 8, 12]);
        assert!(ns
            .iter()
            .all(|&n| restrict(&one_x_y(), n).unwrap().degree().unwrap() <= 1000));
        assert!(
            restrict(&one_x_y(), ns.last().unwrap() * 2)
                .unwrap()
                .degree()
                .unwrap()
                > 1000
        );
    }

    const M_1XY: f64 = 0.3230659472194505;

    #[test]
    fn boyd_lawton_approaches_two_variable_value() {
        let t = boyd_lawton_sequence(&one_x_y(), &[50, 100, 200]).unwrap();
        for r in &t.rows {
            assert!((r.estimate.log_value - M_1XY).abs() < 0.02, "n = {}", r.n);
            assert!(r.height_preserved);
        }
    }

    #[test]
    fn qmc_accuracy_and_symmetry() {
        let f = one_x_y();
        let m = mahler_qmc(&f, 1 << 20, 7).unwrap();
        assert!((m.log_value - M_1XY).abs() < 2e-3, "{m:?}");
        let g: MultiLaurentPoly = "1 + x1 - 2*x2 + x1*x2^2 - x3".parse().unwrap();
        let base = mahler_qmc(&g, 1 << 18, 3).unwrap();
        let perm = mahler_qmc(&g.permute_variables(&[2, 0, 1]).unwrap(), 1 << 18, 3).unwrap();
        let neg = mahler_qmc(&g.negate_variable(1).unwrap(), 1 << 18, 3).unwrap();
        let tol = 3.0 * base.error_bound.max(perm.error_bound).max(neg.error_bound) + 1e-3;
        assert!((base.log_value - perm.log_value).abs() < tol);
        assert!((base.log_value - neg.log_value).abs() < tol);
    }
}
