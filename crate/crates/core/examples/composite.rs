//! For composite `k = st`, products `g(z^m) h(z^l)` of all-ones polynomials
//! give unit-coefficient k-nomials with measure 1 for infinitely many `(m, l)`.
//!
//! ```text
//! cargo run --release --example composite -- 2 3
//! ```

use sparse_mahler::census::composite_construction;

fn main() -> sparse_mahler::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("integer argument"))
        .collect();
    let s = args.first().copied().unwrap_or(2);
    let t = args.get(1).copied().unwrap_or(2);
    println!("k = {}: (m, l) -> exponents", s * t);
    let mut found = 0;
    'search: for m in 2..200u64 {
        for l in 2..200u64 {
            let Ok(r) = composite_construction(s, t, m, l) else {
                continue;
            };
            println!(
                "  ({m:>2}, {l:>2}) -> {:?}  member: {}",
                r.exponents,
                r.is_member()
            );
            found += 1;
            if found == 12 {
                break 'search;
            }
        }
    }
    Ok(())
}
