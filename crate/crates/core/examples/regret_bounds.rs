//! Minimum bias constants and regret upper bounds, compared with simulation.
//!
//! cargo run --release --example regret_bounds

use banditlab::env::BanditInstance;
use banditlab::harness::{mean_curve, run_experiment, ExperimentConfig};
use banditlab::policy::PolicyConfig;
use banditlab::rbmle::{theoretical_c_alpha_min, theoretical_regret_bound, BoundParams, BoundVariant};
use banditlab::FamilySpec;

fn main() -> banditlab::Result<()> {
    let spec = FamilySpec::gaussian(1.0)?;
    let means = [1.0, 0.5];
    let params = BoundParams::default();
    for variant in BoundVariant::ALL {
        match theoretical_c_alpha_min(&spec, &means, 0.25, variant, &params) {
            Ok(c) => println!("{:<18} C_alpha >= {c:.1}", variant.name()),
            Err(e) => println!("{:<18} {e}", variant.name()),
        }
    }

    let c_alpha = theoretical_c_alpha_min(&spec, &means, 0.25, BoundVariant::Gaussian, &params)?;
    let mut config = ExperimentConfig::new(
        BanditInstance::new(spec, means.to_vec())?,
        10_000,
        20,
        7,
        vec![PolicyConfig::rbmle_fixed(c_alpha)],
    );
    config.checkpoints = vec![10, 100, 1_000, 10_000];
    let results = run_experiment(&config)?;
    println!("\nfixed C_alpha = {c_alpha}:");
    println!("{:>7} {:>12} {:>12}", "t", "regret", "bound");
    for (t, regret) in mean_curve(&results, "rbmle") {
        let bound = theoretical_regret_bound(&spec, &means, c_alpha, 0.25, t as f64, BoundVariant::Gaussian, &params)?;
        println!("{t:>7} {regret:>12.1} {bound:>12.1}");
    }
    Ok(())
}
