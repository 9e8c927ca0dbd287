//! The normalised index xi(k; nu) and the threshold K*(theta', theta'').
//!
//! cargo run --example k_star

use banditlab::family::{DEFAULT_MAX_ITER, DEFAULT_TOL};
use banditlab::FamilySpec;

fn main() -> banditlab::Result<()> {
    let bernoulli = FamilySpec::bernoulli();
    println!("xi(k; 0.3), Bernoulli:");
    for k in [1.5, 2.0, 5.0, 20.0, 100.0] {
        println!("  k = {k:>5}: {:.6}", bernoulli.xi(k, 0.3)?);
    }
    println!("  limit eta(0.3) = {:.6}", bernoulli.mean_to_natural(0.3)?);

    let gaussian = FamilySpec::gaussian(1.0)?;
    println!("\nK* for Gaussian (analytic 1/(2(hi - lo))) and by bisection:");
    for (hi, lo) in [(1.0, 0.5), (0.7, 0.6), (2.0, -1.0)] {
        let analytic = gaussian.k_star(hi, lo, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
        let searched = gaussian.k_star_bisection(hi, lo, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
        println!("  ({hi}, {lo}): {analytic:.9} vs {searched:.9}");
    }

    println!("\nK* for Bernoulli:");
    for (hi, lo) in [(0.4, 0.2), (0.3, 0.1), (0.7, 0.5), (0.7, 0.0)] {
        match bernoulli.k_star(hi, lo, DEFAULT_TOL, DEFAULT_MAX_ITER) {
            Ok(k) => println!("  ({hi}, {lo}): {k:.6}"),
            // eta(hi) already exceeds xi at the edge of the clipped region
            Err(e) => println!("  ({hi}, {lo}): {e}"),
        }
    }
    Ok(())
}
