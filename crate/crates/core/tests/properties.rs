use num_bigint::BigInt;
use proptest::prelude::*;
use sparse_mahler::bounds::{height_lower_bound, proof_chain};
use sparse_mahler::census::{search_unit, SearchConfig, Shard};
use sparse_mahler::cyclotomic::{cyclotomic_poly, is_cyclotomic_product};
use sparse_mahler::measure::{mahler_scaled, mahler_univariate};
use sparse_mahler::multivar::{restrict, safe_substitution_index};
use sparse_mahler::poly::{MultiLaurentPoly, UnivariateIntPoly};

fn nonzero(range: i64) -> impl Strategy<Value = i64> {
    (1..=range, any::<bool>()).prop_map(|(v, neg)| if neg { -v } else { v })
}

/// Sparse polynomial with nonzero constant term.
fn sparse(max_exp: u64, max_terms: usize, coeff: i64) -> impl Strategy<Value = UnivariateIntPoly> {
    (
        prop::collection::btree_map(1..=max_exp, nonzero(coeff), 1..max_terms),
        nonzero(coeff),
    )
        .prop_map(|(m, c0)| {
            UnivariateIntPoly::from_terms(
                m.into_iter()
                    .chain([(0, c0)])
                    .map(|(e, c)| (e, BigInt::from(c))),
            )
            .unwrap()
        })
}

fn laurent() -> impl Strategy<Value = MultiLaurentPoly> {
    (2usize..=3).prop_flat_map(|vars| {
        prop::collection::btree_map(prop::collection::vec(-6i64..=6, vars), nonzero(9), 2..6)
            .prop_map(move |m| {
                MultiLaurentPoly::from_terms(vars, m.into_iter().map(|(j, c)| (j, BigInt::from(c))))
                    .unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reciprocal_preserves_measure(f in sparse(60, 7, 30)) {
        let a = mahler_univariate(&f).unwrap().log_value;
        let b = mahler_univariate(&f.reciprocal().unwrap()).unwrap().log_value;
        prop_assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
    }

    #[test]
    fn measure_is_additive(f in sparse(25, 5, 12), g in sparse(25, 5, 12)) {
        let fg = &f * &g;
        let lhs = mahler_univariate(&fg).unwrap().log_value;
        let rhs = mahler_univariate(&f).unwrap().log_value + mahler_univariate(&g).unwrap().log_value;
        prop_assert!((lhs - rhs).abs() < 1e-8, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn height_bounds_hold(f in sparse(120, 8, 100)) {
        let m = mahler_univariate(&f).unwrap().log_value;
        let k = f.term_count() as f64;
        let h = f.height().to_string().parse::<f64>().unwrap();
        prop_assert!(m >= height_lower_bound(&f).unwrap() - 1e-9);
        prop_assert!(m <= (k * h).ln() + 1e-9);
    }

    #[test]
    fn chain_shrinks_and_never_raises_measure(f in sparse(80, 7, 50)) {
        let chain = proof_chain(&f).unwrap();
        prop_assert_eq!(chain.len(), f.term_count().saturating_sub(2));
        let mut prev = mahler_univariate(&f).unwrap().log_value;
        for (i, s) in chain.iter().enumerate() {
            prop_assert_eq!(s.poly.term_count(), f.term_count() - 1 - i);
            let m = mahler_scaled(&s.poly).unwrap().log_value;
            prop_assert!(m <= prev + 1e-9);
            prev = m;
        }
    }

    #[test]
    fn printed_polynomials_parse_back(f in sparse(1 << 40, 6, 1 << 20), g in laurent()) {
        prop_assert_eq!(f.to_string().parse::<UnivariateIntPoly>().unwrap(), f);
        let back: MultiLaurentPoly = g.to_string().parse().unwrap();
        // printing drops trailing variables that do not occur
        prop_assert_eq!(back.to_string(), g.to_string());
    }

    #[test]
    fn cyclotomic_factorization_reassembles(
        ns in prop::collection::vec(1u64..40, 0..4),
        rest in sparse(6, 3, 4),
        shift in 0u64..5,
    ) {
        let mut f = rest.shift_up(shift).unwrap();
        for n in &ns {
            f = &f * &cyclotomic_poly(*n).unwrap();
        }
        let fac = is_cyclotomic_product(&f).unwrap();
        prop_assert_eq!(fac.expand().unwrap(), f);
        for n in &ns {
            prop_assert!(fac.multiplicity(*n) >= 1);
        }
        let m = mahler_univariate(&fac.remainder).unwrap().log_value;
        prop_assert_eq!(fac.is_cyclotomic_product(), m.abs() < 1e-9);
    }

    #[test]
    fn safe_index_preserves_support(g in laurent(), extra in 0u64..30) {
        let n = safe_substitution_index(&g).min_safe_n() + extra;
        let r = restrict(&g, n).unwrap();
        prop_assert_eq!(r.term_count(), g.term_count());
        prop_assert_eq!(r.height(), g.height());
    }
}

#[test]
fn shard_union_is_the_whole_search() {
    for count in [2u64, 5] {
        let whole: Vec<Vec<u64>> = search_unit(&SearchConfig::unit(5, 11))
            .unwrap()
            .into_iter()
            .map(|r| r.exponents)
            .collect();
        let mut parts: Vec<Vec<u64>> = (0..count)
            .flat_map(|i| {
                let mut c = SearchConfig::unit(5, 11);
                c.shard = Shard::new(i, count).unwrap();
                search_unit(&c).unwrap().into_iter().map(|r| r.exponents)
            })
            .collect();
        parts.sort();
        let mut sorted = whole.clone();
        sorted.sort();
        assert_eq!(parts, sorted);
    }
}
