//! The height bound `h/2^{k-2} <= M <= k h` for a k-nomial, with the chain
//! of derivatives that certifies the lower bound.
//!
//! ```text
//! cargo run --release --example height_bounds -- "3*z^40 - 7*z^31 + z^17 + 9*z^8 - 2*z^3 + 5"
//! ```

use sparse_mahler::bounds::{verify_height_bounds, StepKind};
use sparse_mahler::poly::parse_univariate;

fn main() -> sparse_mahler::Result<()> {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "3*z^40 - 7*z^31 + z^17 + 9*z^8 - 2*z^3 + 5".to_string());
    let f = parse_univariate(&text)?;
    let r = verify_height_bounds(&f, 1e-9)?;
    println!("f = {f}");
    println!("k = {}, h = {}", r.k, r.height);
    println!(
        "{:.6} <= M = {:.6} <= {:.6}   satisfied: {}",
        r.lower_bound_log.exp(),
        r.measured_log.exp(),
        r.upper_bound_log.exp(),
        r.satisfied
    );
    println!("\nchain (measures must not increase):");
    for s in &r.chain {
        let label = match s.step {
            StepKind::Strip => "strip z^j",
            StepKind::Derivative => "f'/n",
            StepKind::ReciprocalThenDerivative => "(f*)'/n",
        };
        println!(
            "  {:<10} M = {:>14.6}   {}",
            label,
            s.log_measure.unwrap_or(f64::NAN).exp(),
            s.poly
        );
    }
    println!("chain verified: {}", r.chain_verified);
    Ok(())
}
