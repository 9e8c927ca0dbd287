//! A full regret experiment from a JSON config, with a mean-regret table.
//!
//! cargo run --release --example regret_experiment -- configs/gaussian_10arm.json

use banditlab::cli::config::{ConfigFile, Overrides};
use banditlab::harness::{aggregate, mean_curve, run_experiment};

fn main() -> banditlab::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "configs/gaussian_10arm.json".into());
    let file = ConfigFile::load(path.as_ref())?;
    // keep the example quick; pass a config with smaller numbers to go faster
    let overrides = Overrides {
        trials: Some(file.trials.min(10)),
        ..Default::default()
    };
    let config = file.resolve(&overrides)?;
    println!(
        "{} arms ({}), horizon {}, {} trials",
        config.instance.n_arms(),
        config.instance.family.name(),
        config.horizon,
        config.trials
    );

    let results = run_experiment(&config)?;
    println!(
        "\n{:<14} {:>10} {:>9} {:>9} {:>9}",
        "policy", "mean", "std", "q10", "q90"
    );
    for s in aggregate(&results) {
        println!(
            "{:<14} {:>10.1} {:>9.1} {:>9.1} {:>9.1}",
            s.policy, s.mean, s.std, s.quantiles[0], s.quantiles[4]
        );
    }

    let ids: Vec<String> = config.policies.iter().map(|p| p.id().to_string()).collect();
    let curves: Vec<Vec<(u64, f64)>> = ids.iter().map(|id| mean_curve(&results, id)).collect();
    print!("\n{:>8}", "t");
    ids.iter().for_each(|id| print!(" {id:>10}"));
    println!();
    for (k, &(t, _)) in curves[0].iter().enumerate().step_by(4) {
        print!("{t:>8}");
        curves.iter().for_each(|c| print!(" {:>10.1}", c[k].1));
        println!();
    }
    Ok(())
}
