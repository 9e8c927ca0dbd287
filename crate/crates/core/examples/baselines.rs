//! Baseline indices on the same arm statistics, and posterior quantities.
//!
//! cargo run --example baselines

use banditlab::baselines::{
    bucb_index, gpucb_beta, gpucb_index, klucb_index, moss_index, ucb_index, ucbt_index, PosteriorState,
};
use banditlab::rbmle::ArmStats;
use banditlab::rng::policy_rng;
use banditlab::FamilySpec;

fn main() -> banditlab::Result<()> {
    let (t, horizon) = (200u64, 10_000u64);
    let bernoulli = FamilySpec::bernoulli();
    let rewards = [1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 1.0];
    let stats = ArmStats::from_rewards(&rewards);
    println!(
        "arm with {} pulls, mean {:.2}, at t = {t}",
        stats.pulls,
        stats.empirical_mean()
    );
    println!("  UCB     {:.4}", ucb_index(&stats, t));
    println!("  UCBT    {:.4}", ucbt_index(&stats, t));
    println!("  MOSS    {:.4}", moss_index(&stats, horizon, 10));
    println!("  KL-UCB  {:.4}", klucb_index(&bernoulli, &stats, t, 0.0, 100)?);

    let mut beta_post = PosteriorState::prior(&bernoulli);
    rewards.iter().for_each(|&r| beta_post.update(r));
    println!("  Bayes-UCB {:.4}", bucb_index(&beta_post, t, horizon, 0.0));
    let mut rng = policy_rng(1, 0);
    let draws: Vec<String> = (0..5).map(|_| format!("{:.3}", beta_post.sample(&mut rng))).collect();
    println!("  Thompson draws {}", draws.join(" "));

    let gaussian = FamilySpec::gaussian(1.0)?;
    let mut normal_post = PosteriorState::prior(&gaussian);
    rewards.iter().for_each(|&r| normal_post.update(r));
    let beta_t = gpucb_beta(10, t, 1e-5);
    println!("\nGaussian posterior {:?}", normal_post.normal_moments());
    println!(
        "  GP-UCB beta_t {beta_t:.4}, index {:.4}",
        gpucb_index(&normal_post, beta_t).unwrap_or(f64::NAN)
    );
    Ok(())
}
