//! Counter-based reward tables: every policy and every chunking sees the
//! same sample path.
//!
//! cargo run --example reward_tables

use banditlab::env::{generate_chunk, generate_table, BanditInstance};
use banditlab::FamilySpec;

fn main() -> banditlab::Result<()> {
    let instance = BanditInstance::exponential_from_rates(FamilySpec::exponential(), &[2.0, 4.0, 10.0])?;
    println!(
        "means {:?}, best arm {}, gaps {:?}",
        instance.means,
        instance.best_arm(),
        instance.gaps()
    );

    let table = generate_table(&instance, 10_000, 42, 0)?;
    for arm in 0..instance.n_arms() {
        let col = table.column(arm);
        let mean = col.iter().sum::<f64>() / col.len() as f64;
        println!("  arm {arm}: sample mean {mean:.4} (true {:.4})", instance.means[arm]);
    }

    // a chunk starting at t = 5001 holds exactly the same draws
    let chunk = generate_chunk(&instance, 10_000, 42, 0, 5_001, 100)?;
    let same = (5_001..5_101).all(|t| (0..3).all(|a| chunk.pull(t, a).unwrap() == table.pull(t, a).unwrap()));
    println!("chunk matches full table: {same}");
    println!(
        "trial 1 differs: {}",
        generate_table(&instance, 10, 42, 1)?.values() != generate_table(&instance, 10, 42, 0)?.values()
    );
    Ok(())
}
