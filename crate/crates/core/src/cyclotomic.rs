//! Cyclotomic polynomials and exact detection of cyclotomic products.
//!
//! Detection screens each candidate order `n` numerically at `e^{2πi/n}`
//! using the sparse input, then confirms by exact division. A candidate is
//! only skipped when the screen shows `|f(ζ_n)|` far above rounding level,
//! so the answer never depends on floating point.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::int_terms;
use crate::poly::{dense, UnivariateIntPoly};

/// Relative size of `|f(ζ_n)|` (against the coefficient 1-norm) above which
/// `Φ_n` is known not to divide `f`.
const SCREEN_REL: f64 = 1e-9;

/// `sign · z^{z_power} · ∏ Φ_n^{mult} · remainder`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloFactorization {
    pub sign: i8,
    pub z_power: u64,
    pub factors: Vec<CycloFactor>,
    #[serde(rename = "remainder_terms", with = "int_terms")]
    pub remainder: UnivariateIntPoly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloFactor {
    pub n: u64,
    pub mult: u32,
}

impl CycloFactorization {
    /// True when the input is `±z^j` times a product of cyclotomic polynomials.
    pub fn is_cyclotomic_product(&self) -> bool {
        self.remainder.is_one()
    }

    pub fn multiplicity(&self, n: u64) -> u32 {
        self.factors.iter().find(|f| f.n == n).map_or(0, |f| f.mult)
    }

    /// Multiplies the factorization back out.
    pub fn expand(&self) -> Result<UnivariateIntPoly> {
        let mut acc = self.remainder.to_dense_ascending();
        for f in &self.factors {
            let phi = cyclotomic_dense(f.n);
            for _ in 0..f.mult {
                acc = dense::mul(&acc, &phi);
            }
        }
        let p = UnivariateIntPoly::from_dense_ascending(&acc).shift_up(self.z_power)?;
        Ok(if self.sign < 0 { -&p } else { p })
    }
}

type Cache = RwLock<HashMap<u64, Arc<dense::Dense>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn cyclotomic_dense(n: u64) -> Arc<dense::Dense> {
    if let Some(p) = cache().read().unwrap().get(&n) {
        return p.clone();
    }
    let p = Arc::new(build_cyclotomic(n));
    cache().write().unwrap().entry(n).or_insert(p).clone()
}

/// `Φ_n = ∏_{d | n} (z^d - 1)^{μ(n/d)}`, multiplications first.
fn build_cyclotomic(n: u64) -> dense::Dense {
    let divisors: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    let (mut ups, mut downs) = (Vec::new(), Vec::new());
    for &d in &divisors {
        match mobius(n / d) {
            1 => ups.push(d as usize),
            -1 => downs.push(d as usize),
            _ => {}
        }
    }
    let mut acc: dense::Dense = vec![BigInt::one()];
    for d in ups {
        // times (z^d - 1)
        let mut out = vec![BigInt::zero(); acc.len() + d];
        for (i, c) in acc.iter().enumerate() {
            out[i + d] += c;
            out[i] -= c;
        }
        acc = out;
    }
    for d in downs {
        // divided by (z^d - 1): a_i = q_{i-d} - q_i
        let qlen = acc.len() - d;
        let mut q = vec![BigInt::zero(); qlen];
        for i in 0..qlen {
            let prev = if i >= d {
                q[i - d].clone()
            } else {
                BigInt::zero()
            };
            q[i] = prev - &acc[i];
        }
        acc = q;
    }
    dense::trim(&mut acc);
    acc
}

/// The `n`-th cyclotomic polynomial.
pub fn cyclotomic_poly(n: u64) -> Result<UnivariateIntPoly> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "cyclotomic index must be positive".into(),
        ));
    }
    Ok(UnivariateIntPoly::from_dense_ascending(&cyclotomic_dense(
        n,
    )))
}

pub fn mobius(n: u64) -> i8 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Prime factorization by trial division.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == vec![(n, 1)]
}

/// Smallest `L` with `φ(n) > degree` for every `n >= L`.
///
/// Uses `n/φ(n) < e^γ ln ln n + 3/ln ln n` (valid for `n >= 3`); the right-hand
/// side leaves `n/(…)` increasing once `n >= 30`.
fn phi_search_limit(degree: u64) -> u64 {
    let lower = |n: f64| {
        let ll = n.ln().ln();
        n / (1.781_072_418 * ll + 3.0 / ll)
    };
    let mut lim = 30u64;
    while lower(lim as f64) <= degree as f64 {
        lim = lim.saturating_mul(2);
    }
    // bisect down to the first point past the threshold
    let (mut lo, mut hi) = (lim / 2, lim);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if lower(mid as f64) > degree as f64 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi.max(30)
}

/// All `n` with `φ(n) <= degree`, ascending.
pub fn orders_with_phi_at_most(degree: u64) -> Vec<u64> {
    let limit = phi_search_limit(degree) as usize;
    let mut phi: Vec<u64> = (0..limit as u64).collect();
    for p in 2..limit {
        if phi[p] == p as u64 {
            for m in (p..limit).step_by(p) {
                phi[m] = phi[m] / p as u64 * (p as u64 - 1);
            }
        }
    }
    (1..limit)
        .filter(|&n| phi[n] <= degree)
        .map(|n| n as u64)
        .collect()
}

/// Strips `±z^j` and divides out every cyclotomic factor to full multiplicity.
pub fn is_cyclotomic_product(f: &UnivariateIntPoly) -> Result<CycloFactorization> {
    let (z_power, g) = f
        .strip_trivial()
        .map_err(|_| Error::ZeroPolynomial("is_cyclotomic_product"))?;
    let sign: i8 = if g.leading_coefficient().unwrap().is_negative() {
        -1
    } else {
        1
    };
    let g = if sign < 0 { -&g } else { g };
    let degree = g.degree().unwrap();
    let mut factors = Vec::new();
    if degree == 0 {
        return Ok(CycloFactorization {
            sign,
            z_power,
            factors,
            remainder: g,
        });
    }
    let length = g.length_f64();
    let candidates: Vec<u64> = orders_with_phi_at_most(degree)
        .into_iter()
        .filter(|&n| g.eval_root_of_unity(1, n).norm() <= SCREEN_REL * length)
        .collect();
    let mut rem = g.to_dense_ascending();
    for n in candidates {
        let phi = cyclotomic_dense(n);
        let mut mult = 0;
        while dense::degree(&rem).unwrap_or(0) + 1 >= phi.len() {
            match dense::exact_div(&rem, &phi) {
                Some(q) => {
                    rem = q;
                    mult += 1;
                }
                None => break,
            }
        }
        if mult > 0 {
            factors.push(CycloFactor { n, mult });
        }
        if dense::degree(&rem) == Some(0) {
            break;
        }
    }
    Ok(CycloFactorization {
        sign,
        z_power,
        factors,
        remainder: UnivariateIntPoly::from_dense_ascending(&rem),
    })
}

/// `Φ_m(1)`: `q` when `m` is a power of the prime `q`, otherwise 1.
pub fn phi_at_one(m: u64) -> Result<u64> {
    match m {
        0 => Err(Error::InvalidArgument(
            "cyclotomic index must be positive".into(),
        )),
        1 => Err(Error::PhiOneExcluded),
        _ => {
            let f = factorize(m);
            Ok(if f.len() == 1 { f[0].0 } else { 1 })
        }
    }
}

fn primes_up_to(k: u64) -> Vec<u64> {
    (2..=k).filter(|&p| is_prime(p)).collect()
}

/// Squarefree positive integers whose prime factors are all `<= k`
/// (always contains 1 and 2).
pub fn mann_orders(k: u64) -> Result<BTreeSet<u64>> {
    if k < 2 {
        return Err(Error::InvalidArgument("mann_orders needs k >= 2".into()));
    }
    let primes = primes_up_to(k);
    if primes.len() > 15 {
        return Err(Error::InvalidArgument(format!(
            "mann_orders: k = {k} gives too many prime factors"
        )));
    }
    let mut out = BTreeSet::from([1u64, 2]);
    for mask in 0u32..(1 << primes.len()) {
        let q = primes
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, p)| *p)
            .product();
        out.insert(q);
    }
    Ok(out)
}

/// Proper, nonempty term subsets (as indices into `f.terms()`) whose sum is
/// divisible by `Φ_q`.
pub fn subsum_divisibility(f: &UnivariateIntPoly, q: u64) -> Result<Vec<Vec<usize>>> {
    let k = f.term_count();
    if k > 20 {
        return Err(Error::SubsetScanInfeasible { terms: k });
    }
    if q == 0 {
        return Err(Error::InvalidArgument(
            "cyclotomic index must be positive".into(),
        ));
    }
    let phi = cyclotomic_dense(q);
    let terms = f.terms();
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << k).saturating_sub(1) {
        let idx: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
        let sub = UnivariateIntPoly::from_terms(idx.iter().map(|&i| terms[i].clone()))?;
        let (_, sub) = sub.strip_trivial()?;
        if sub.eval_root_of_unity(1, q).norm() > SCREEN_REL * sub.length_f64() {
            continue;
        }
        if sub.degree().unwrap() as usize + 1 < phi.len() {
            continue;
        }
        if dense::exact_div(&sub.to_dense_ascending(), &phi).is_some() {
            out.push(idx);
        }
    }
    Ok(out)
}

/// For a unit-coefficient `p`-nomial: whether `Φ_p | f`, and `f(1) = p`.
pub fn prime_power_divisor_check(f: &UnivariateIntPoly) -> Result<(bool, usize)> {
    if f.is_zero() || !f.is_all_unit_coefficients() {
        return Err(Error::NonUnitCoefficients);
    }
    let p = f.term_count();
    if p < 2 {
        return Ok((false, p));
    }
    let divisible =
        dense::exact_div(&f.to_dense_ascending(), &cyclotomic_dense(p as u64)).is_some();
    Ok((divisible, p))
}
