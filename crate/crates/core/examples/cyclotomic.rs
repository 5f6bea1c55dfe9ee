//! Which trinomials `1 ± z^a ± z^b` are products of cyclotomic polynomials,
//! and how close the others come to measure 1.
//!
//! ```text
//! cargo run --release --example cyclotomic -- 30
//! ```

use num_bigint::BigInt;
use sparse_mahler::cyclotomic::is_cyclotomic_product;
use sparse_mahler::measure::mahler_univariate;
use sparse_mahler::poly::UnivariateIntPoly;

fn main() -> sparse_mahler::Result<()> {
    let max: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(30);
    let mut cyclotomic = 0;
    let mut closest: Option<(f64, UnivariateIntPoly)> = None;
    for a in 2..=max {
        for b in 1..a {
            for (sa, sb) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let f = UnivariateIntPoly::from_terms([
                    (a, BigInt::from(sa)),
                    (b, BigInt::from(sb)),
                    (0, BigInt::from(1)),
                ])?;
                if is_cyclotomic_product(&f)?.is_cyclotomic_product() {
                    cyclotomic += 1;
                    continue;
                }
                let m = mahler_univariate(&f)?.log_value;
                if closest.as_ref().is_none_or(|(best, _)| m < *best) {
                    closest = Some((m, f));
                }
            }
        }
    }
    println!("1 ± z^a ± z^b, b < a <= {max}: {cyclotomic} cyclotomic products");
    if let Some((m, f)) = closest {
        let fac = is_cyclotomic_product(&f)?;
        println!("smallest other measure: M = {:.10} for {f}", m.exp());
        let parts: Vec<String> = fac
            .factors
            .iter()
            .map(|c| format!("Phi_{}^{}", c.n, c.mult))
            .collect();
        println!(
            "  cyclotomic part: [{}], remaining factor {}",
            parts.join(" "),
            fac.remainder
        );
    }
    Ok(())
}
