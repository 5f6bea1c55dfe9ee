//! Unit-coefficient k-nomials `z^{n_1} + … + z^{n_{k-1}} + 1` with measure 1.
//!
//! ```text
//! cargo run --release --example search_unit -- 5 8
//! ```

use sparse_mahler::census::{search_unit, SearchConfig};

fn main() -> sparse_mahler::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("integer argument"))
        .collect();
    let k = args.first().copied().unwrap_or(5) as usize;
    let max_degree = args.get(1).copied().unwrap_or(8);
    let records = search_unit(&SearchConfig::unit(k, max_degree))?;
    let members: Vec<_> = records.iter().filter(|r| r.is_member()).collect();
    println!(
        "k = {k}, n_1 <= {max_degree}: {} tuples, {} with M = 1",
        records.len(),
        members.len()
    );
    for r in members {
        let fac = r.factors.as_ref().unwrap();
        let parts: Vec<String> = fac
            .factors
            .iter()
            .map(|f| {
                if f.mult == 1 {
                    format!("Phi_{}", f.n)
                } else {
                    format!("Phi_{}^{}", f.n, f.mult)
                }
            })
            .collect();
        println!("  {:?}  = {}", r.exponents, parts.join(" "));
    }
    Ok(())
}
