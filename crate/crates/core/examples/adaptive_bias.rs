//! How the adaptive schedules pick alpha(t) as confidence intervals separate.
//!
//! cargo run --example adaptive_bias

use banditlab::rbmle::{adaptive_alpha_bernoulli, adaptive_alpha_gaussian, ArmStats, BetaFn, BiasSchedule};
use banditlab::FamilySpec;

fn main() -> banditlab::Result<()> {
    let beta = BetaFn::default();
    println!("Gaussian, sigma = 1, means 1.0 / 0.5, pulls split 80/20:");
    for t in [10u64, 100, 1_000, 100_000, 10_000_000] {
        let n = t.max(2);
        let stats = [
            ArmStats::with_mean(1.0, n * 4 / 5),
            ArmStats::with_mean(0.5, n - n * 4 / 5),
        ];
        let a = adaptive_alpha_gaussian(&stats, t, 1.0, beta, true)?;
        println!(
            "  t = {t:>8}  Delta_hat {:.4}  C_hat {:>10.1}  beta {:.3}  alpha {:.3}",
            a.snapshot.delta_hat,
            a.c_alpha_hat,
            beta.eval(t as f64),
            a.alpha
        );
    }

    println!("\nBernoulli, means 0.9 / 0.2:");
    let spec = FamilySpec::bernoulli();
    for t in [100u64, 10_000, 1_000_000] {
        let stats = [ArmStats::with_mean(0.9, t / 2), ArmStats::with_mean(0.2, t / 2)];
        let a = adaptive_alpha_bernoulli(&spec, &stats, t, 0.25, beta)?;
        println!("  t = {t:>8}  shortcut {}  alpha {:.3}", a.shortcut, a.alpha);
    }

    let fixed = BiasSchedule::Fixed { c_alpha: 512.0 };
    let stats = [ArmStats::with_mean(1.0, 5), ArmStats::with_mean(0.5, 5)];
    println!(
        "\nfixed C_alpha = 512 at t = 1000: alpha = {:.2}",
        fixed.alpha(&FamilySpec::gaussian(1.0)?, &stats, 1000)?
    );
    Ok(())
}
