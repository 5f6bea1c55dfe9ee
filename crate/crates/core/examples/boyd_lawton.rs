//! Measures of `F(z, z^n)` approaching the two-variable measure of
//! `F = 1 + x1 + x2`, next to a direct estimate over the torus.
//!
//! ```text
//! cargo run --release --example boyd_lawton -- "1 + x1 + x2"
//! ```

use sparse_mahler::multivar::{boyd_lawton_sequence, mahler_qmc, safe_substitution_index};
use sparse_mahler::poly::parse_multivariate;

fn main() -> sparse_mahler::Result<()> {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "1 + x1 + x2".to_string());
    let f = parse_multivariate(&text)?;
    let safe = safe_substitution_index(&f);
    println!("F = {f}");
    println!(
        "restrictions keep every monomial for n >= {}",
        safe.min_safe_n()
    );

    let torus = mahler_qmc(&f, 1 << 20, 1)?;
    println!(
        "lattice estimate: m = {:.8} +/- {:.1e}\n",
        torus.log_value, torus.error_bound
    );

    let ns = [2, 3, 5, 10, 20, 50, 100, 200, 500, 1000];
    let table = boyd_lawton_sequence(&f, &ns)?;
    println!("{:>6}  {:>12}  {:>10}", "n", "m(F_n)", "gap");
    for row in &table.rows {
        let m = row.estimate.log_value;
        println!(
            "{:>6}  {:>12.8}  {:>10.2e}",
            row.n,
            m,
            (m - torus.log_value).abs()
        );
    }
    Ok(())
}
