use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest exponent magnitude accepted anywhere in the crate.
pub const MAX_EXPONENT: u64 = 1 << 62;

/// Sparse polynomial in one variable with arbitrary-precision integer coefficients.
///
/// Terms are stored with strictly decreasing exponents and nonzero
/// coefficients; the empty list is the zero polynomial.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct UnivariateIntPoly {
    terms: Vec<(u64, BigInt)>,
}

/// `numerator / denominator`, a polynomial with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledPoly {
    pub numerator: UnivariateIntPoly,
    pub denominator: BigUint,
}

impl UnivariateIntPoly {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, BigInt::one())
    }

    pub fn monomial(exponent: u64, coefficient: impl Into<BigInt>) -> Self {
        let c = coefficient.into();
        if c.is_zero() {
            Self::zero()
        } else {
            Self {
                terms: vec![(exponent, c)],
            }
        }
    }

    /// Builds a polynomial from an arbitrary term list, summing collisions.
    pub fn from_terms<I, C>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, C)>,
        C: Into<BigInt>,
    {
        let mut acc: BTreeMap<u64, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            if e > MAX_EXPONENT {
                return Err(Error::ExponentOverflow);
            }
            *acc.entry(e).or_default() += c.into();
        }
        Ok(Self::from_map(acc))
    }

    pub(crate) fn from_map(acc: BTreeMap<u64, BigInt>) -> Self {
        let terms = acc
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Self { terms }
    }

    /// Coefficients listed from the constant term upward.
    pub fn from_dense_ascending(coeffs: &[BigInt]) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as u64, c.clone()))
            .collect();
        Self { terms }
    }

    /// Dense coefficient vector from the constant term upward.
    pub fn to_dense_ascending(&self) -> Vec<BigInt> {
        let Some(deg) = self.degree() else {
            return Vec::new();
        };
        let mut out = vec![BigInt::zero(); deg as usize + 1];
        for (e, c) in &self.terms {
            out[*e as usize] = c.clone();
        }
        out
    }

    pub fn terms(&self) -> &[(u64, BigInt)] {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.first().map(|t| t.0)
    }

    pub fn lowest_exponent(&self) -> Option<u64> {
        self.terms.last().map(|t| t.0)
    }

    pub fn leading_coefficient(&self) -> Option<&BigInt> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn coefficient(&self, exponent: u64) -> BigInt {
        self.terms
            .binary_search_by(|(e, _)| exponent.cmp(e))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coefficient(0)
    }

    /// Maximum absolute value of the coefficients; 0 for the zero polynomial.
    pub fn height(&self) -> BigUint {
        self.terms
            .iter()
            .map(|(_, c)| c.magnitude().clone())
            .max()
            .unwrap_or_default()
    }

    /// Sum of |coefficients|, as a float.
    pub fn length_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(_, c)| c.to_f64().unwrap_or(f64::INFINITY).abs())
            .sum()
    }

    /// `z^deg · f(1/z)`: the coefficients reversed over the support.
    pub fn reciprocal(&self) -> Result<Self> {
        let deg = self.degree().ok_or(Error::ZeroPolynomial("reciprocal"))?;
        let terms = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| (deg - e, c.clone()))
            .collect();
        Ok(Self { terms })
    }

    /// `f' / deg f`.
    pub fn derivative_scaled(&self) -> Result<ScaledPoly> {
        let deg = self.degree().ok_or(Error::DerivativeDegenerate)?;
        if deg == 0 {
            return Err(Error::DerivativeDegenerate);
        }
        Ok(ScaledPoly {
            numerator: self.derivative(),
            denominator: BigUint::from(deg),
        })
    }

    pub fn derivative(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| *e > 0)
            .map(|(e, c)| (e - 1, c * BigInt::from(*e)))
            .collect();
        Self { terms }
    }

    /// Splits `f = z^j · f1` with `f1(0) != 0`.
    pub fn strip_trivial(&self) -> Result<(u64, Self)> {
        let j = self
            .lowest_exponent()
            .ok_or(Error::ZeroPolynomial("strip_trivial"))?;
        Ok((j, self.shift_down(j)))
    }

    fn shift_down(&self, j: u64) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e - j, c.clone())).collect();
        Self { terms }
    }

    /// Multiplies by `z^j`.
    pub fn shift_up(&self, j: u64) -> Result<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let e = e
                .checked_add(j)
                .filter(|e| *e <= MAX_EXPONENT)
                .ok_or(Error::ExponentOverflow)?;
            terms.push((e, c.clone()));
        }
        Ok(Self { terms })
    }

    /// gcd of all exponents (0 for constants and the zero polynomial).
    pub fn exponent_gcd(&self) -> u64 {
        self.terms.iter().fold(0u64, |g, (e, _)| g.gcd(e))
    }

    /// `g` with `f(z) = g(z^d)`; `d` must divide every exponent.
    pub fn deflate(&self, d: u64) -> Self {
        assert!(d > 0 && self.terms.iter().all(|(e, _)| e % d == 0));
        let terms = self.terms.iter().map(|(e, c)| (e / d, c.clone())).collect();
        Self { terms }
    }

    /// `f(z^d)`.
    pub fn inflate(&self, d: u64) -> Result<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let e = e
                .checked_mul(d)
                .filter(|e| *e <= MAX_EXPONENT)
                .ok_or(Error::ExponentOverflow)?;
            terms.push((e, c.clone()));
        }
        Ok(Self { terms })
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.terms.iter().map(|(_, c)| c).sum()
    }

    /// Coefficients converted to `f64`, in term order.
    pub fn coeffs_f64(&self) -> Vec<(u64, f64)> {
        self.terms
            .iter()
            .map(|(e, c)| (*e, c.to_f64().unwrap_or(f64::NAN)))
            .collect()
    }

    /// Evaluates at a point of the unit circle given by the angle fraction
    /// `num / den` of a full turn. Exponents are reduced modulo `den` exactly.
    pub fn eval_root_of_unity(&self, num: u64, den: u64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let phase = mul_mod(*e, num, den);
            acc += unit_phase(phase, den) * c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    pub fn is_all_unit_coefficients(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_one())
    }

    pub fn is_positive_leading(&self) -> bool {
        self.leading_coefficient()
            .is_some_and(|c| c.sign() == Sign::Plus)
    }
}

/// `a * b mod m` without overflow.
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `exp(2πi · k/n)` with `0 <= k < n`, using symmetry so the argument to
/// sin/cos stays within an eighth of a turn.
pub(crate) fn unit_phase(k: u64, n: u64) -> Complex64 {
    let k = k % n;
    let (k8, n8) = (k as u128 * 8, n as u128);
    let octant = (k8 / n8) as u32;
    let rem = (k8 - octant as u128 * n8) as f64 / (8 * n8) as f64;
    let base = |x: f64| {
        let th = 2.0 * std::f64::consts::PI * x;
        (th.cos(), th.sin())
    };
    let (c, s) = match octant {
        0 => base(rem),
        1 => {
            let (c, s) = base(0.125 - rem);
            (s, c)
        }
        2 => {
            let (c, s) = base(rem);
            (-s, c)
        }
        3 => {
            let (c, s) = base(0.125 - rem);
            (-c, s)
        }
        4 => {
            let (c, s) = base(rem);
            (-c, -s)
        }
        5 => {
            let (c, s) = base(0.125 - rem);
            (-s, -c)
        }
        6 => {
            let (c, s) = base(rem);
            (s, -c)
        }
        _ => {
            let (c, s) = base(0.125 - rem);
            (c, -s)
        }
    };
    Complex64::new(c, s)
}

impl ScaledPoly {
    pub fn from_poly(p: UnivariateIntPoly) -> Self {
        Self {
            numerator: p,
            denominator: BigUint::one(),
        }
    }

    pub fn term_count(&self) -> usize {
        self.numerator.term_count()
    }

    /// Height as a float: `h(numerator) / denominator`.
    pub fn height_f64(&self) -> f64 {
        self.numerator.height().to_f64().unwrap_or(f64::INFINITY)
            / self.denominator.to_f64().unwrap_or(f64::INFINITY)
    }
}

impl fmt::Display for ScaledPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.is_one() {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "({})/{}", self.numerator, self.denominator)
        }
    }
}

impl fmt::Display for UnivariateIntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let mag = c.magnitude();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match (*e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{mag}*z")?,
                (e, true) => write!(f, "z^{e}")?,
                (e, false) => write!(f, "{mag}*z^{e}")?,
            }
        }
        Ok(())
    }
}

impl Add for &UnivariateIntPoly {
    type Output = UnivariateIntPoly;
    fn add(self, rhs: Self) -> UnivariateIntPoly {
        let mut acc: BTreeMap<u64, BigInt> = BTreeMap::new();
        for (e, c) in self.terms.iter().chain(rhs.terms.iter()) {
            *acc.entry(*e).or_default() += c;
        }
        UnivariateIntPoly::from_map(acc)
    }
}

impl Neg for &UnivariateIntPoly {
    type Output = UnivariateIntPoly;
    fn neg(self) -> UnivariateIntPoly {
        UnivariateIntPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Sub for &UnivariateIntPoly {
    type Output = UnivariateIntPoly;
    fn sub(self, rhs: Self) -> UnivariateIntPoly {
        self + &(-rhs)
    }
}

/// Panics if a product exponent exceeds [`MAX_EXPONENT`]; use
/// [`UnivariateIntPoly::checked_mul`] for untrusted inputs.
impl Mul for &UnivariateIntPoly {
    type Output = UnivariateIntPoly;
    fn mul(self, rhs: Self) -> UnivariateIntPoly {
        self.checked_mul(rhs)
            .expect("exponent overflow in polynomial product")
    }
}

impl UnivariateIntPoly {
    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        let mut acc: BTreeMap<u64, BigInt> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea
                    .checked_add(*eb)
                    .filter(|e| *e <= MAX_EXPONENT)
                    .ok_or(Error::ExponentOverflow)?;
                *acc.entry(e).or_default() += ca * cb;
            }
        }
        Ok(Self::from_map(acc))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }
}
