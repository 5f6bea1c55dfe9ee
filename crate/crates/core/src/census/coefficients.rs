use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;

use super::{
    exponent_tuples, CensusRecord, ExponentTuple, Provenance, RecordKind, SearchConfig, Shard,
};
use crate::cyclotomic::is_cyclotomic_product;
use crate::error::{Error, Result};

/// Representative of `{a, -a, rev(a), -rev(a)}`: the lexicographic maximum.
fn canonical(a: &[i64]) -> Vec<i64> {
    let neg: Vec<i64> = a.iter().map(|x| -x).collect();
    let rev: Vec<i64> = a.iter().rev().copied().collect();
    let negrev: Vec<i64> = rev.iter().map(|x| -x).collect();
    [a.to_vec(), neg, rev, negrev].into_iter().max().unwrap()
}

/// Coefficient tuples `(a_1, …, a_k)`, `0 < |a_i| <= bound`, one per symmetry
/// class, that can have measure 1 at all: outer coefficients `±1`.
pub fn coefficient_tuples(k: usize, bound: u64) -> Result<Vec<Vec<i64>>> {
    if k < 2 {
        return Err(Error::InvalidArgument("k must be >= 2".into()));
    }
    let bound = i64::try_from(bound)
        .map_err(|_| Error::InvalidArgument("coefficient bound too large".into()))?;
    if bound < 1 {
        return Err(Error::InvalidArgument(
            "coefficient bound must be >= 1".into(),
        ));
    }
    let inner: Vec<i64> = (-bound..=bound).filter(|x| *x != 0).collect();
    let mut out = Vec::new();
    let mut cur = vec![0i64; k - 2];
    let mut idx = vec![0usize; k - 2];
    loop {
        for (c, i) in cur.iter_mut().zip(&idx) {
            *c = inner[*i];
        }
        for first in [1i64, -1] {
            for last in [1i64, -1] {
                let mut a = Vec::with_capacity(k);
                a.push(first);
                a.extend_from_slice(&cur);
                a.push(last);
                if canonical(&a) == a {
                    out.push(a);
                }
            }
        }
        // odometer over the inner coefficients
        let Some(pos) = idx.iter().rposition(|i| *i + 1 < inner.len()) else {
            break;
        };
        idx[pos] += 1;
        for i in idx.iter_mut().skip(pos + 1) {
            *i = 0;
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// For each coefficient class, the first exponent tuple (in enumeration
/// order, `n_1 <= max_exponent`) at which the polynomial is a cyclotomic
/// product. Only classes with a witness are returned.
pub fn coefficient_census(
    k: usize,
    coeff_bound: u64,
    max_exponent: u64,
) -> Result<Vec<CensusRecord>> {
    let config = SearchConfig {
        k,
        max_degree: max_exponent,
        coeff_bound: Some(coeff_bound),
        shard: Shard::WHOLE,
        output_path: None,
    };
    config.validate()?;
    let hash = config.config_hash();
    let exponents: Vec<ExponentTuple> = exponent_tuples(k, max_exponent)?.collect();
    let classes = coefficient_tuples(k, coeff_bound)?;
    let hits = classes
        .par_iter()
        .map(|a| -> Result<Option<CensusRecord>> {
            // a common factor c forces M >= |c| > 1
            if a.iter().fold(0i64, |g, x| g.gcd(x)) != 1 {
                return Ok(None);
            }
            let coeffs: Vec<BigInt> = a.iter().map(|&x| BigInt::from(x)).collect();
            for t in &exponents {
                let f = t.with_coefficients(&coeffs)?;
                let factors = is_cyclotomic_product(&f)?;
                if factors.is_cyclotomic_product() {
                    return Ok(Some(CensusRecord {
                        kind: RecordKind::CoeffCensusHit,
                        k,
                        exponents: t.entries().to_vec(),
                        coefficients: coeffs,
                        factors: Some(factors),
                        m_value: 0.0,
                        provenance: Provenance::Search,
                        config_hash: hash.clone(),
                        phi_p_divides: None,
                    }));
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(hits.into_iter().flatten().collect())
}
