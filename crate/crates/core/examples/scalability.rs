//! Per-decision time against the number of arms.
//!
//! cargo run --release --example scalability

use banditlab::env::BanditInstance;
use banditlab::harness::{scalability_sweep, ExperimentConfig};
use banditlab::policy::{PolicyConfig, PolicyName};
use banditlab::FamilySpec;

fn main() -> banditlab::Result<()> {
    let instance = BanditInstance::new(FamilySpec::gaussian(1.0)?, vec![0.7, 0.6, 0.5])?;
    let policies = vec![
        PolicyConfig::new(PolicyName::Rbmle),
        PolicyConfig::rbmle_fixed(50.0).with_label("rbmle_fixed"),
        PolicyConfig::new(PolicyName::Ucb),
        PolicyConfig::new(PolicyName::Klucb),
        PolicyConfig::new(PolicyName::Ts),
        PolicyConfig::new(PolicyName::Bucb),
        PolicyConfig::new(PolicyName::Gpucb),
    ];
    let base = ExperimentConfig::new(instance, 5_000, 3, 1, policies);
    let rows = scalability_sweep(&base, &[10, 30, 50, 70])?;
    println!("{:<12} {:>6} {:>10} {:>10}", "policy", "arms", "mean us", "std us");
    for r in rows {
        println!(
            "{:<12} {:>6} {:>10.3} {:>10.3}",
            r.policy, r.n_arms, r.mean_us, r.std_us
        );
    }
    Ok(())
}
