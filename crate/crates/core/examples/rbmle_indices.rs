//! RBMLE indices for the three families, generic and closed form side by side.
//!
//! cargo run --example rbmle_indices

use banditlab::rbmle::{closed_form_index, gaussian_index_scaled, generic_index, select_arm, ArmStats};
use banditlab::FamilySpec;

fn main() -> banditlab::Result<()> {
    let alpha = 2.0;
    let arms = [
        ArmStats::with_mean(0.4, 10),
        ArmStats::with_mean(0.55, 40),
        ArmStats::with_mean(0.9, 3),
    ];

    for spec in [
        FamilySpec::bernoulli(),
        FamilySpec::gaussian(1.0)?,
        FamilySpec::exponential(),
    ] {
        println!("{} (alpha = {alpha})", spec.name());
        let mut closed = Vec::new();
        for s in &arms {
            let generic = generic_index(&spec, s.empirical_mean(), s.pulls, alpha)?;
            let closed_form = closed_form_index(&spec, s, alpha);
            // the Gaussian closed form is p + alpha/2N; rescale to compare
            let comparable = match spec.sigma() {
                Some(sigma) => gaussian_index_scaled(s, alpha, sigma),
                None => closed_form,
            };
            println!(
                "  p = {:.2}  N = {:>2}  generic {generic:>9.5}  closed form {closed_form:>9.5}  gap {:.1e}",
                s.empirical_mean(),
                s.pulls,
                (generic - comparable).abs()
            );
            closed.push(closed_form);
        }
        println!("  selected arm: {}", select_arm(&closed));
    }
    Ok(())
}
