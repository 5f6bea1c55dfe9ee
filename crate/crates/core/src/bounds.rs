//! Height inequalities for k-nomials: the lower bound `M(f) >= h(f)/2^{k-2}`
//! with an auditable reduction chain, the trivial upper bound `k·h(f)`, and
//! the closed-form constants that accompany them.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::json;
use crate::measure::{big_ln, mahler_scaled, mahler_univariate_with, DEFAULT_TOL};
use crate::poly::{ScaledPoly, UnivariateIntPoly};

/// Constant in the isolation gap, taken at its stated upper limit.
pub const GAP_CONSTANT: f64 = 0.785;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    Strip,
    Derivative,
    ReciprocalThenDerivative,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainStep {
    pub step: StepKind,
    pub poly: ScaledPoly,
    /// Filled in by [`verify_height_bounds`].
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_measure: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub k: usize,
    #[serde(serialize_with = "json::big_uint")]
    pub height: BigUint,
    pub lower_bound_log: f64,
    pub upper_bound_log: f64,
    pub measured_log: f64,
    pub satisfied: bool,
    /// Every consecutive pair of chain measures is non-increasing within tolerance.
    pub chain_verified: bool,
    pub chain: Vec<ChainStep>,
}

fn ln_biguint(v: &BigUint) -> f64 {
    big_ln(&BigInt::from(v.clone()))
}

/// `log h(f) - (k-2) log 2`; for a monomial, `log h(f)`, which equals `m(f)`.
pub fn height_lower_bound(f: &UnivariateIntPoly) -> Result<f64> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("height_lower_bound"));
    }
    let k = f.term_count();
    let lh = ln_biguint(&f.height());
    Ok(if k >= 2 {
        lh - (k - 2) as f64 * std::f64::consts::LN_2
    } else {
        lh
    })
}

/// Reduction from `f` to a binomial. At each step, with `h = |a_i|` at the
/// largest such exponent `n_i`, take `f'/n_1` when `2 n_i >= n_1` and
/// `(f*)'/n_1` otherwise, then remove any factor `z^j`.
pub fn proof_chain(f: &UnivariateIntPoly) -> Result<Vec<ChainStep>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("proof_chain"));
    }
    if f.constant_term() == BigInt::from(0) {
        return Err(Error::Precondition(
            "zero constant term: strip the z^j factor first".into(),
        ));
    }
    let mut chain = Vec::new();
    let mut cur = f.clone();
    let mut denominator = BigUint::one();
    while cur.term_count() > 2 {
        let n1 = cur.degree().unwrap();
        let h = cur.height();
        // terms are in decreasing exponent order, so the first hit has the largest n_i
        let ni = cur
            .terms()
            .iter()
            .find(|(_, c)| *c.magnitude() == h)
            .unwrap()
            .0;
        let (kind, next) = if 2 * ni as u128 >= n1 as u128 {
            (StepKind::Derivative, cur.derivative())
        } else {
            (
                StepKind::ReciprocalThenDerivative,
                cur.reciprocal()?.derivative(),
            )
        };
        let (_, next) = next.strip_trivial()?;
        denominator *= BigUint::from(n1);
        debug_assert_eq!(next.term_count() + 1, cur.term_count());
        chain.push(ChainStep {
            step: kind,
            poly: ScaledPoly {
                numerator: next.clone(),
                denominator: denominator.clone(),
            },
            log_measure: None,
        });
        cur = next;
    }
    Ok(chain)
}

/// Measures `f`, evaluates both bounds and checks the chain numerically.
pub fn verify_height_bounds(f: &UnivariateIntPoly, tol: f64) -> Result<BoundReport> {
    let (j, f1) = f
        .strip_trivial()
        .map_err(|_| Error::ZeroPolynomial("verify_height_bounds"))?;
    let k = f1.term_count();
    let height = f1.height();
    let measured_log = mahler_univariate_with(&f1, DEFAULT_TOL)?.log_value;
    let lower_bound_log = height_lower_bound(&f1)?;
    let upper_bound_log = (k as f64).ln() + ln_biguint(&height);

    let mut chain = Vec::new();
    if j > 0 {
        chain.push(ChainStep {
            step: StepKind::Strip,
            poly: ScaledPoly::from_poly(f1.clone()),
            log_measure: Some(measured_log),
        });
    }
    let mut chain_verified = true;
    let mut prev = measured_log;
    for mut step in proof_chain(&f1)? {
        let m = mahler_scaled(&step.poly)?.log_value;
        chain_verified &= prev >= m - tol;
        prev = m;
        step.log_measure = Some(m);
        chain.push(step);
    }
    Ok(BoundReport {
        k,
        height,
        lower_bound_log,
        upper_bound_log,
        measured_log,
        satisfied: measured_log >= lower_bound_log - tol,
        chain_verified,
        chain,
    })
}

fn binomial(n: u64, r: u64) -> BigUint {
    (0..r).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn require_k(k: u64, what: &str) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("{what} needs k >= 2")));
    }
    Ok(())
}

/// `1 / C(k-1, ⌊(k-2)/2⌋)`.
pub fn extremal_ratio(k: u64) -> Result<BigRational> {
    require_k(k, "extremal_ratio")?;
    let c = binomial(k - 1, (k - 2) / 2);
    Ok(BigRational::new(BigInt::one(), c.into()))
}

/// `M/h` for `(z+1)^{k-1}`, i.e. `1 / C(k-1, ⌊(k-1)/2⌋)`.
pub fn binomial_family_ratio(k: u64) -> Result<BigRational> {
    require_k(k, "binomial_family_ratio")?;
    let c = binomial(k - 1, (k - 1) / 2);
    Ok(BigRational::new(BigInt::one(), c.into()))
}

/// `2^{k-2} e^B`, the largest height possible for a k-nomial with `m <= B`.
pub fn height_cap_for_measure(k: u64, b: f64) -> Result<f64> {
    require_k(k, "height_cap_for_measure")?;
    if b.is_nan() || b < 0.0 {
        return Err(Error::InvalidArgument("measure cap B must be >= 0".into()));
    }
    Ok(2f64.powi((k - 2) as i32) * b.exp())
}

/// `ln(M_gap - 1) = -a · 3^{⌊(k-2)/4⌋} · k² · ln k`, finite for every `k`.
pub fn gap_excess_ln(k: u64) -> Result<f64> {
    require_k(k, "gap_lower_bound")?;
    let kf = k as f64;
    Ok(-GAP_CONSTANT * 3f64.powf(((k - 2) / 4) as f64) * kf * kf * kf.ln())
}

/// `1 + exp(-a · 3^{⌊(k-2)/4⌋} · k² · ln k)`. Rounds to 1 in `f64` from
/// `k = 6` on; use [`gap_excess_ln`] there.
pub fn gap_lower_bound(k: u64) -> Result<f64> {
    Ok(1.0 + gap_excess_ln(k)?.exp())
}

/// `(2^{k-2}, (2^{k-1}+1)^k)`: height cap for `M = 1` and the number of
/// coefficient tuples it allows.
pub fn measure_one_coeff_cap(k: u64) -> Result<(BigUint, BigUint)> {
    require_k(k, "measure_one_coeff_cap")?;
    let k32 = u32::try_from(k).map_err(|_| Error::InvalidArgument("k too large".into()))?;
    let height = BigUint::from(2u8).pow(k32 - 2);
    let count = (BigUint::from(2u8).pow(k32 - 1) + 1u8).pow(k32);
    Ok((height, count))
}

/// Rational as a float, for reporting.
pub fn ratio_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
