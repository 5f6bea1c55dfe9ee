//! Coefficient patterns `(a_1, …, a_k)` that admit measure 1 for some
//! exponents up to a bound, with one witness each.
//!
//! ```text
//! cargo run --release --example coefficient_census -- 3 2 20
//! ```

use sparse_mahler::census::coefficient_census;

fn main() -> sparse_mahler::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("integer argument"))
        .collect();
    let k = args.first().copied().unwrap_or(3) as usize;
    let bound = args.get(1).copied().unwrap_or(2);
    let max_exponent = args.get(2).copied().unwrap_or(20);
    let hits = coefficient_census(k, bound, max_exponent)?;
    println!(
        "k = {k}, |a_i| <= {bound}, n_1 <= {max_exponent}: {} classes with a witness",
        hits.len()
    );
    for r in &hits {
        let coeffs: Vec<String> = r.coefficients.iter().map(|c| c.to_string()).collect();
        println!("  ({})  e.g. {}", coeffs.join(","), r.polynomial()?);
    }
    Ok(())
}
