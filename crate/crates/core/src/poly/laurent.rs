use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use super::univariate::{UnivariateIntPoly, MAX_EXPONENT};
use crate::error::{Error, Result};

/// Sparse Laurent polynomial in `num_vars` variables with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiLaurentPoly {
    num_vars: usize,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

/// Substitution exponents `r = (r_1, …, r_s)`, so `x_i ↦ z^{r_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentVector(pub Vec<i64>);

impl ExponentVector {
    /// `(1, n, n^2, …, n^{len-1})`.
    pub fn geometric(n: u64, len: usize) -> Result<Self> {
        let mut out = Vec::with_capacity(len);
        let mut cur: i64 = 1;
        for i in 0..len {
            out.push(cur);
            if i + 1 < len {
                cur = i64::try_from(n)
                    .ok()
                    .and_then(|n| cur.checked_mul(n))
                    .filter(|c| c.unsigned_abs() <= MAX_EXPONENT)
                    .ok_or(Error::ExponentOverflow)?;
            }
        }
        Ok(Self(out))
    }
}

/// Integer matrix with `rows` = target variable count and `cols` = source
/// variable count; row-major entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl ExponentMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<i64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(
                "exponent matrix dimensions must be positive".into(),
            ));
        }
        if entries.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "exponent matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("ragged exponent matrix".into()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        Self {
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries[r * self.cols + c]
    }

    fn apply(&self, j: &[i64]) -> Result<Vec<i64>> {
        (0..self.rows)
            .map(|r| {
                let s: i128 = (0..self.cols)
                    .map(|c| self.get(r, c) as i128 * j[c] as i128)
                    .sum();
                checked_exponent(s)
            })
            .collect()
    }
}

fn checked_exponent(v: i128) -> Result<i64> {
    if v.unsigned_abs() > MAX_EXPONENT as u128 {
        Err(Error::ExponentOverflow)
    } else {
        Ok(v as i64)
    }
}

impl MultiLaurentPoly {
    pub fn zero(num_vars: usize) -> Self {
        assert!(
            num_vars >= 1,
            "a Laurent polynomial needs at least one variable"
        );
        Self {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    /// Builds from `(exponent vector, coefficient)` pairs, summing collisions
    /// and dropping zeros.
    pub fn from_terms<I, C>(num_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, C)>,
        C: Into<BigInt>,
    {
        if num_vars == 0 {
            return Err(Error::InvalidArgument("num_vars must be at least 1".into()));
        }
        let mut acc: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
        for (j, c) in terms {
            if j.len() != num_vars {
                return Err(Error::InvalidArgument(format!(
                    "exponent vector of length {} in a {num_vars}-variable polynomial",
                    j.len()
                )));
            }
            if j.iter().any(|e| e.unsigned_abs() > MAX_EXPONENT) {
                return Err(Error::ExponentOverflow);
            }
            *acc.entry(j).or_default() += c.into();
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Self {
            num_vars,
            terms: acc,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Terms in increasing lexicographic exponent order.
    pub fn terms(
        &self,
    ) -> impl DoubleEndedIterator<Item = (&Vec<i64>, &BigInt)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn height(&self) -> BigUint {
        self.terms
            .values()
            .map(|c| c.magnitude().clone())
            .max()
            .unwrap_or_default()
    }

    /// `F(z^A)`: every exponent vector `j` maps to `A·j`.
    pub fn substitute_matrix(&self, a: &ExponentMatrix) -> Result<Self> {
        if a.cols() != self.num_vars {
            return Err(Error::InvalidArgument(format!(
                "matrix has {} columns but the polynomial has {} variables",
                a.cols(),
                self.num_vars
            )));
        }
        let mut acc: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
        for (j, c) in &self.terms {
            *acc.entry(a.apply(j)?).or_default() += c;
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Self {
            num_vars: a.rows(),
            terms: acc,
        })
    }

    /// `F(z^{r_1}, …, z^{r_s})`, shifted so the lowest exponent is 0.
    pub fn substitute_powers(&self, r: &ExponentVector) -> Result<UnivariateIntPoly> {
        if r.0.len() != self.num_vars {
            return Err(Error::InvalidArgument(format!(
                "exponent vector has length {} but the polynomial has {} variables",
                r.0.len(),
                self.num_vars
            )));
        }
        let row = ExponentMatrix::new(1, self.num_vars, r.0.clone())?;
        let image = self.substitute_matrix(&row)?;
        let Some(min) = image.terms.keys().map(|j| j[0]).min() else {
            return Ok(UnivariateIntPoly::zero());
        };
        let mut shifted = Vec::with_capacity(image.terms.len());
        for (j, c) in image.terms {
            let e = (j[0] as i128 - min as i128) as u128;
            if e > MAX_EXPONENT as u128 {
                return Err(Error::ExponentOverflow);
            }
            shifted.push((e as u64, c));
        }
        UnivariateIntPoly::from_terms(shifted)
    }

    /// Exponent vectors of the support, in increasing lexicographic order.
    pub fn support(&self) -> Vec<&Vec<i64>> {
        self.terms.keys().collect()
    }

    pub fn permute_variables(&self, perm: &[usize]) -> Result<Self> {
        let n = self.num_vars;
        let mut seen = vec![false; n];
        if perm.len() != n
            || perm
                .iter()
                .any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidArgument(
                "not a permutation of the variables".into(),
            ));
        }
        let terms = self
            .terms
            .iter()
            .map(|(j, c)| (perm.iter().map(|&p| j[p]).collect(), c.clone()));
        Self::from_terms(n, terms)
    }

    pub fn negate_variable(&self, var: usize) -> Result<Self> {
        if var >= self.num_vars {
            return Err(Error::InvalidArgument("variable index out of range".into()));
        }
        let terms = self.terms.iter().map(|(j, c)| {
            let mut j = j.clone();
            j[var] = -j[var];
            (j, c.clone())
        });
        Self::from_terms(self.num_vars, terms)
    }
}

impl From<&UnivariateIntPoly> for MultiLaurentPoly {
    fn from(p: &UnivariateIntPoly) -> Self {
        let terms = p
            .terms()
            .iter()
            .map(|(e, c)| (vec![*e as i64], c.clone()))
            .collect();
        Self { num_vars: 1, terms }
    }
}

impl fmt::Display for MultiLaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (j, c)) in self.terms.iter().rev().enumerate() {
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.magnitude();
            let vars: Vec<String> = j
                .iter()
                .enumerate()
                .filter(|(_, e)| **e != 0)
                .map(|(v, e)| {
                    if *e == 1 {
                        format!("x{}", v + 1)
                    } else {
                        format!("x{}^{e}", v + 1)
                    }
                })
                .collect();
            match (vars.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{}", vars.join("*"))?,
                (false, false) => write!(f, "{mag}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}
