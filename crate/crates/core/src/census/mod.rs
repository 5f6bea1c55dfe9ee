//! Finite searches over unit-coefficient and small-coefficient sparse
//! polynomials with measure 1, and the product construction that yields
//! infinitely many such polynomials for composite term counts.

mod coefficients;
mod store;

use std::collections::HashSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cyclotomic::{
    is_cyclotomic_product, is_prime, prime_power_divisor_check, CycloFactorization,
};
use crate::error::{Error, Result};
use crate::json;
use crate::measure::mahler_univariate;
use crate::poly::UnivariateIntPoly;

pub use coefficients::{coefficient_census, coefficient_tuples};
pub use store::{completed_tuples, scan_records, RecordWriter};

/// Below this a numerical measure is passed on to the exact test.
const PREFILTER_LOG: f64 = 1e-6;
const BATCH: usize = 1024;

/// `n_1 > n_2 > … > n_{k-1} > 0` with `gcd = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct ExponentTuple(Vec<u64>);

impl ExponentTuple {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("exponent tuple is empty".into()));
        }
        if entries.windows(2).any(|w| w[0] <= w[1]) || *entries.last().unwrap() == 0 {
            return Err(Error::InvalidArgument(
                "exponents must be strictly decreasing and positive".into(),
            ));
        }
        if entries.iter().fold(0, |g, e| g.gcd(e)) != 1 {
            return Err(Error::InvalidArgument("exponents must have gcd 1".into()));
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    /// Number of terms of the associated polynomial, `len + 1`.
    pub fn k(&self) -> usize {
        self.0.len() + 1
    }

    /// `z^{n_1} + … + z^{n_{k-1}} + 1`.
    pub fn polynomial(&self) -> UnivariateIntPoly {
        self.with_coefficients(&vec![BigInt::from(1); self.k()])
            .expect("distinct exponents")
    }

    /// `a_1 z^{n_1} + … + a_{k-1} z^{n_{k-1}} + a_k`.
    pub fn with_coefficients(&self, coeffs: &[BigInt]) -> Result<UnivariateIntPoly> {
        if coeffs.len() != self.k() {
            return Err(Error::InvalidArgument("coefficient count must be k".into()));
        }
        UnivariateIntPoly::from_terms(
            self.0
                .iter()
                .copied()
                .chain([0])
                .zip(coeffs.iter().cloned()),
        )
    }
}

impl TryFrom<Vec<u64>> for ExponentTuple {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<ExponentTuple> for Vec<u64> {
    fn from(t: ExponentTuple) -> Self {
        t.0
    }
}

impl fmt::Display for ExponentTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All tuples with `n_1 <= max_degree`, ordered by `n_1`, then `n_2`, …
pub fn exponent_tuples(k: usize, max_degree: u64) -> Result<TupleIter> {
    if k < 2 {
        return Err(Error::InvalidArgument("k must be >= 2".into()));
    }
    if max_degree < (k - 1) as u64 {
        return Err(Error::InvalidArgument("max_degree must be >= k - 1".into()));
    }
    Ok(TupleIter {
        asc: (1..k as u64).collect(),
        max_degree,
        done: false,
    })
}

/// Colexicographic walk over `(k-1)`-subsets of `1..=max_degree`, skipping
/// those with a common factor.
#[derive(Clone, Debug)]
pub struct TupleIter {
    asc: Vec<u64>,
    max_degree: u64,
    done: bool,
}

impl TupleIter {
    fn advance(&mut self) {
        let r = self.asc.len();
        let i = (0..r)
            .find(|&i| i + 1 == r || self.asc[i] + 1 < self.asc[i + 1])
            .unwrap();
        self.asc[i] += 1;
        for j in 0..i {
            self.asc[j] = j as u64 + 1;
        }
        if self.asc[r - 1] > self.max_degree {
            self.done = true;
        }
    }
}

impl Iterator for TupleIter {
    type Item = ExponentTuple;

    fn next(&mut self) -> Option<ExponentTuple> {
        while !self.done {
            let gcd = self.asc.iter().fold(0, |g, e| g.gcd(e));
            let out = (gcd == 1).then(|| ExponentTuple(self.asc.iter().rev().copied().collect()));
            self.advance();
            if out.is_some() {
                return out;
            }
        }
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shard {
    pub index: u64,
    pub count: u64,
}

impl Shard {
    pub const WHOLE: Shard = Shard { index: 0, count: 1 };

    pub fn new(index: u64, count: u64) -> Result<Self> {
        if count == 0 || index >= count {
            return Err(Error::InvalidArgument(format!(
                "shard {index}/{count}: need 0 <= index < count"
            )));
        }
        Ok(Self { index, count })
    }

    pub fn owns(&self, position: u64) -> bool {
        position % self.count == self.index
    }
}

impl FromStr for Shard {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("shard must look like i/c, got {s:?}"));
        let (i, c) = s.split_once('/').ok_or_else(bad)?;
        Shard::new(
            i.trim().parse().map_err(|_| bad())?,
            c.trim().parse().map_err(|_| bad())?,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub k: usize,
    /// Largest exponent searched.
    pub max_degree: u64,
    /// Only used by the coefficient census.
    pub coeff_bound: Option<u64>,
    pub shard: Shard,
    pub output_path: Option<PathBuf>,
}

impl SearchConfig {
    pub fn unit(k: usize, max_degree: u64) -> Self {
        Self {
            k,
            max_degree,
            coeff_bound: None,
            shard: Shard::WHOLE,
            output_path: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        Shard::new(self.shard.index, self.shard.count)?;
        exponent_tuples(self.k, self.max_degree).map(|_| ())
    }

    /// Digest of the parameters that determine the record contents. Shard and
    /// output path are excluded so shard outputs can be merged.
    pub fn config_hash(&self) -> String {
        let key = serde_json::json!({
            "schema": "sparse-mahler/1",
            "search": if self.coeff_bound.is_some() { "coefficients" } else { "sc" },
            "k": self.k,
            "max_degree": self.max_degree,
            "coeff_bound": self.coeff_bound,
        });
        short_hash(&key)
    }
}

fn short_hash(v: &serde_json::Value) -> String {
    let digest = Sha256::digest(v.to_string().as_bytes());
    hex::encode(&digest[..8])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordKind {
    ScMember,
    ScNonmember,
    CoeffCensusHit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Search,
    Construction,
}

/// One line of the record store.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub kind: RecordKind,
    pub k: usize,
    pub exponents: Vec<u64>,
    #[serde(with = "json::int_list")]
    pub coefficients: Vec<BigInt>,
    /// Absent when the numerical measure already rules out `M = 1`.
    pub factors: Option<CycloFactorization>,
    pub m_value: f64,
    pub provenance: Provenance,
    pub config_hash: String,
    /// For prime `k`: whether `Φ_k` divides the polynomial.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_p_divides: Option<bool>,
}

impl CensusRecord {
    pub fn is_member(&self) -> bool {
        self.factors
            .as_ref()
            .is_some_and(CycloFactorization::is_cyclotomic_product)
    }

    pub fn polynomial(&self) -> Result<UnivariateIntPoly> {
        let exps = self.exponents.iter().copied().chain([0]);
        UnivariateIntPoly::from_terms(exps.zip(self.coefficients.iter().cloned()))
    }
}

fn classify_tuple(t: &ExponentTuple, hash: &str) -> Result<CensusRecord> {
    let f = t.polynomial();
    let m = mahler_univariate(&f)?;
    let factors = if m.log_value > PREFILTER_LOG + m.error_bound {
        None
    } else {
        Some(is_cyclotomic_product(&f)?)
    };
    let member = factors
        .as_ref()
        .is_some_and(CycloFactorization::is_cyclotomic_product);
    let phi_p_divides = if is_prime(t.k() as u64) {
        Some(prime_power_divisor_check(&f)?.0)
    } else {
        None
    };
    Ok(CensusRecord {
        kind: if member {
            RecordKind::ScMember
        } else {
            RecordKind::ScNonmember
        },
        k: t.k(),
        exponents: t.entries().to_vec(),
        coefficients: vec![BigInt::from(1); t.k()],
        factors,
        m_value: if member { 0.0 } else { m.log_value },
        provenance: Provenance::Search,
        config_hash: hash.to_string(),
        phi_p_divides,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchSummary {
    pub emitted: u64,
    pub members: u64,
    pub resumed: u64,
}

/// Classifies every tuple of the shard not in `done`, handing records to
/// `emit` in enumeration order.
pub fn search_unit_with(
    config: &SearchConfig,
    done: &HashSet<Vec<u64>>,
    mut emit: impl FnMut(&CensusRecord) -> Result<()>,
) -> Result<SearchSummary> {
    config.validate()?;
    let hash = config.config_hash();
    let mut summary = SearchSummary::default();
    let mut tuples = exponent_tuples(config.k, config.max_degree)?
        .enumerate()
        .filter(|(i, _)| config.shard.owns(*i as u64))
        .map(|(_, t)| t);
    loop {
        let batch: Vec<ExponentTuple> = tuples.by_ref().take(BATCH).collect();
        if batch.is_empty() {
            break;
        }
        let todo: Vec<&ExponentTuple> = batch
            .iter()
            .filter(|t| !done.contains(t.entries()))
            .collect();
        summary.resumed += (batch.len() - todo.len()) as u64;
        let records = todo
            .par_iter()
            .map(|t| classify_tuple(t, &hash))
            .collect::<Result<Vec<_>>>()?;
        for r in &records {
            emit(r)?;
            summary.emitted += 1;
            summary.members += r.is_member() as u64;
        }
    }
    Ok(summary)
}

/// All records of the shard, in memory.
pub fn search_unit(config: &SearchConfig) -> Result<Vec<CensusRecord>> {
    let mut out = Vec::new();
    search_unit_with(config, &HashSet::new(), |r| {
        out.push(r.clone());
        Ok(())
    })?;
    Ok(out)
}

/// Runs the search into `config.output_path`, skipping tuples already on
/// disk when `resume` is set.
pub fn search_unit_to_store(config: &SearchConfig, resume: bool) -> Result<SearchSummary> {
    let path = config
        .output_path
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("search needs an output path".into()))?;
    let done = if resume && path.exists() {
        completed_tuples(path, &config.config_hash())?
    } else {
        HashSet::new()
    };
    let mut writer = RecordWriter::open(path, resume)?;
    let summary = search_unit_with(config, &done, |r| writer.append(r))?;
    writer.finish()?;
    Ok(summary)
}

fn gcd_with_factorial(m: u64, t: u64) -> u64 {
    let mut rest = m;
    let mut g = 1;
    for i in 2..=t.min(m) {
        let d = rest.gcd(&i);
        g *= d;
        rest /= d;
        if rest == 1 {
            break;
        }
    }
    g
}

/// `g(z^m) h(z^l)` with `g = 1 + … + z^{s-1}` and `h = 1 + … + z^{t-1}`: an
/// `st`-nomial with unit coefficients and measure 1.
pub fn composite_construction(s: u64, t: u64, m: u64, l: u64) -> Result<CensusRecord> {
    for (name, v) in [("s", s), ("t", t), ("m", m), ("l", l)] {
        if v < 2 {
            return Err(Error::InvalidArgument(format!("{name} must be > 1")));
        }
    }
    let checks = [
        ("gcd(m, l)", m.gcd(&l)),
        ("gcd(m, t!)", gcd_with_factorial(m, t)),
        ("gcd(l, s!)", gcd_with_factorial(l, s)),
    ];
    for (name, g) in checks {
        if g != 1 {
            return Err(Error::Precondition(format!("{name} = {g} != 1")));
        }
    }
    let overflow = || Error::ExponentOverflow;
    let g = UnivariateIntPoly::from_terms(
        (0..s)
            .map(|i| i.checked_mul(m).map(|e| (e, 1)))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(overflow)?,
    )?;
    let h = UnivariateIntPoly::from_terms(
        (0..t)
            .map(|j| j.checked_mul(l).map(|e| (e, 1)))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(overflow)?,
    )?;
    let f = g.checked_mul(&h)?;
    let k = (s * t) as usize;
    if f.term_count() != k || !f.is_all_unit_coefficients() {
        return Err(Error::Precondition(
            "product does not have s*t unit coefficients".into(),
        ));
    }
    let exponents: Vec<u64> = f
        .terms()
        .iter()
        .map(|(e, _)| *e)
        .filter(|e| *e > 0)
        .collect();
    let tuple = ExponentTuple::new(exponents)?;
    let factors = is_cyclotomic_product(&f)?;
    let member = factors.is_cyclotomic_product();
    let m_value = if member {
        0.0
    } else {
        mahler_univariate(&f)?.log_value
    };
    let key = serde_json::json!({ "schema": "sparse-mahler/1", "construction": [s, t, m, l] });
    Ok(CensusRecord {
        kind: if member {
            RecordKind::ScMember
        } else {
            RecordKind::ScNonmember
        },
        k,
        exponents: tuple.entries().to_vec(),
        coefficients: vec![BigInt::from(1); k],
        factors: Some(factors),
        m_value,
        provenance: Provenance::Construction,
        config_hash: short_hash(&key),
        phi_p_divides: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuples(k: usize, d: u64) -> Vec<Vec<u64>> {
        exponent_tuples(k, d).unwrap().map(Vec::from).collect()
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(
            tuples(3, 4),
            vec![vec![2, 1], vec![3, 1], vec![3, 2], vec![4, 1], vec![4, 3]]
        );
        assert_eq!(tuples(2, 3), vec![vec![1]]);
        assert_eq!(tuples(5, 4), vec![vec![4, 3, 2, 1]]);
        assert!(exponent_tuples(1, 4).is_err());
        assert!(exponent_tuples(5, 3).is_err());
    }

    #[test]
    fn enumeration_counts_match_brute_force() {
        for k in 2..=5usize {
            for d in (k as u64 - 1)..=12 {
                let mut expect = 0;
                for mask in 0u32..(1 << d) {
                    if mask.count_ones() as usize == k - 1 {
                        let g = (1..=d)
                            .filter(|i| mask >> (i - 1) & 1 == 1)
                            .fold(0, |g, e| g.gcd(&e));
                        expect += (g == 1) as usize;
                    }
                }
                let got = tuples(k, d);
                assert_eq!(got.len(), expect, "k={k} d={d}");
                assert!(got.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn tuple_validation() {
        assert!(ExponentTuple::new(vec![4, 2]).is_err());
        assert!(ExponentTuple::new(vec![2, 3]).is_err());
        assert!(ExponentTuple::new(vec![3, 0]).is_err());
        let t = ExponentTuple::new(vec![6, 4, 3, 2]).unwrap();
        assert_eq!(t.polynomial().to_string(), "z^6 + z^4 + z^3 + z^2 + 1");
        assert_eq!(t.to_string(), "(6,4,3,2)");
    }

    #[test]
    fn shards() {
        assert_eq!(
            "1/3".parse::<Shard>().unwrap(),
            Shard { index: 1, count: 3 }
        );
        assert!("3/3".parse::<Shard>().is_err());
        assert!("x".parse::<Shard>().is_err());
    }

    #[test]
    fn small_k5_members() {
        let recs = search_unit(&SearchConfig::unit(5, 8)).unwrap();
        let members: Vec<&CensusRecord> = recs.iter().filter(|r| r.is_member()).collect();
        let a = members
            .iter()
            .find(|r| r.exponents == [4, 3, 2, 1])
            .unwrap();
        assert_eq!(a.factors.as_ref().unwrap().factors.len(), 1);
        assert_eq!(a.factors.as_ref().unwrap().multiplicity(5), 1);
        let b = members
            .iter()
            .find(|r| r.exponents == [6, 4, 3, 2])
            .unwrap();
        let fb = b.factors.as_ref().unwrap();
        assert_eq!(
            (fb.multiplicity(5), fb.multiplicity(6), fb.factors.len()),
            (1, 1, 2)
        );
        for r in &members {
            let f = r.polynomial().unwrap();
            assert_eq!(r.factors.as_ref().unwrap().expand().unwrap(), f);
            assert_eq!(f.eval_at_one(), BigInt::from(5));
            assert_eq!(r.phi_p_divides, Some(true));
        }
    }

    #[test]
    fn k4_member_from_product() {
        let recs = search_unit(&SearchConfig::unit(4, 8)).unwrap();
        assert!(recs
            .iter()
            .any(|r| r.exponents == [8, 5, 3] && r.is_member()));
        assert!(recs.iter().all(|r| r.phi_p_divides.is_none()));
    }

    #[test]
    fn sharding_partitions() {
        let whole: HashSet<Vec<u64>> = search_unit(&SearchConfig::unit(4, 12))
            .unwrap()
            .into_iter()
            .map(|r| r.exponents)
            .collect();
        let mut parts = HashSet::new();
        for i in 0..3 {
            let mut c = SearchConfig::unit(4, 12);
            c.shard = Shard::new(i, 3).unwrap();
            for r in search_unit(&c).unwrap() {
                assert!(parts.insert(r.exponents));
            }
        }
        assert_eq!(parts, whole);
    }

    #[test]
    fn construction_examples() {
        let r = composite_construction(2, 2, 3, 5).unwrap();
        assert_eq!(r.exponents, vec![8, 5, 3]);
        assert!(r.is_member());
        assert_eq!(r.provenance, Provenance::Construction);

        let r = composite_construction(2, 3, 7, 5).unwrap();
        assert_eq!(r.k, 6);
        assert!(r.is_member());
        let expect =
            &"1 + z^7".parse::<UnivariateIntPoly>().unwrap() * &"1 + z^5 + z^10".parse().unwrap();
        assert_eq!(r.polynomial().unwrap(), expect);

        match composite_construction(2, 2, 2, 3) {
            Err(Error::Precondition(msg)) => assert!(msg.contains("gcd(m, t!) = 2")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            composite_construction(2, 2, 3, 9),
            Err(Error::Precondition(_))
        ));
        assert!(composite_construction(1, 2, 3, 5).is_err());
    }

    #[test]
    fn record_json_shape() {
        let r = composite_construction(2, 2, 3, 5).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in [
            "kind",
            "k",
            "exponents",
            "coefficients",
            "factors",
            "m_value",
            "provenance",
            "config_hash",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["kind"], "sc_member");
        let back: CensusRecord = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
