//! Measure of a univariate polynomial by root finding and by quadrature on
//! the unit circle, side by side.
//!
//! ```text
//! cargo run --release --example measure -- "z^3 - z - 1"
//! ```

use sparse_mahler::measure::{find_roots, mahler_quadrature, mahler_univariate, DEFAULT_TOL};
use sparse_mahler::poly::parse_univariate;

fn main() -> sparse_mahler::Result<()> {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "z^3 - z - 1".to_string());
    let f = parse_univariate(&text)?;
    let roots = mahler_univariate(&f)?;
    let quad = mahler_quadrature(&f, 1 << 16)?;
    println!("f = {f}");
    println!(
        "roots:      m = {:.15}  M = {:.15}  (+/- {:.1e})",
        roots.log_value,
        roots.measure(),
        roots.error_bound
    );
    println!(
        "quadrature: m = {:.15}  M = {:.15}  (+/- {:.1e})",
        quad.log_value,
        quad.measure(),
        quad.error_bound
    );

    let (_, stripped) = f.strip_trivial()?;
    if stripped.degree().unwrap_or(0) <= 40 && stripped.degree().unwrap_or(0) > 0 {
        let set = find_roots(&stripped, DEFAULT_TOL)?;
        println!("roots outside the unit circle:");
        for r in set.roots.iter().filter(|r| r.norm() > 1.0) {
            println!("  {:+.12} {:+.12}i   |r| = {:.12}", r.re, r.im, r.norm());
        }
    }
    Ok(())
}
