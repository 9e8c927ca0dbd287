//! Runs the numerical property suites and prints each check.
//!
//! cargo run --release --example verify_suites

use banditlab::verify::Suite;

fn main() {
    let mut ok = true;
    for suite in Suite::ALL {
        let report = suite.run(20240601);
        ok &= report.passed();
        print!("{report}");
    }
    std::process::exit(if ok { 0 } else { 1 });
}
