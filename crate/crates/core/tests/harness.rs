use banditlab::env::BanditInstance;
use banditlab::harness::{aggregate, run_experiment, run_trial, ExperimentConfig, TrialResult};
use banditlab::policy::{PolicyConfig, PolicyName};
use banditlab::FamilySpec;
use proptest::prelude::*;

fn all_policies() -> Vec<PolicyConfig> {
    [
        PolicyName::Rbmle,
        PolicyName::Ucb,
        PolicyName::Ucbt,
        PolicyName::Moss,
        PolicyName::Klucb,
        PolicyName::Ts,
        PolicyName::Bucb,
        PolicyName::Gpucb,
        PolicyName::Gpucbt,
        PolicyName::Oracle,
    ]
    .into_iter()
    .map(PolicyConfig::new)
    .collect()
}

fn gaussian(means: Vec<f64>) -> BanditInstance {
    BanditInstance::new(FamilySpec::gaussian(1.0).unwrap(), means).unwrap()
}

/// Pseudo-regret recomputed from the pull counts.
fn regret_from_pulls(instance: &BanditInstance, r: &TrialResult) -> f64 {
    instance.gaps().iter().zip(&r.pulls).map(|(g, &n)| g * n as f64).sum()
}

#[test]
fn every_policy_runs_on_every_family() {
    let instances = [
        gaussian(vec![0.3, 0.5, 0.1]),
        BanditInstance::new(FamilySpec::bernoulli(), vec![0.3, 0.5, 0.1]).unwrap(),
        BanditInstance::exponential_from_rates(FamilySpec::exponential(), &[2.0, 4.0, 5.0]).unwrap(),
    ];
    for instance in instances {
        let is_gaussian = instance.family.sigma().is_some();
        let policies: Vec<PolicyConfig> = all_policies()
            .into_iter()
            .filter(|p| is_gaussian || !matches!(p.name, PolicyName::Gpucb | PolicyName::Gpucbt))
            .collect();
        let config = ExperimentConfig::new(instance.clone(), 300, 2, 4, policies.clone());
        let results = run_experiment(&config).unwrap();
        assert_eq!(results.len(), policies.len() * 2);
        for r in &results {
            assert_eq!(r.pulls.iter().sum::<u64>(), 300);
            assert!(r.pulls.iter().all(|&n| n >= 1), "{} {:?}", r.policy, r.pulls);
            let direct = regret_from_pulls(&instance, r);
            assert!((direct - r.final_regret).abs() < 1e-9 * direct.max(1.0));
        }
    }
}

#[test]
fn results_are_ordered_by_policy_then_trial() {
    let config = ExperimentConfig::new(
        gaussian(vec![0.0, 1.0]),
        100,
        3,
        1,
        vec![PolicyConfig::new(PolicyName::Ts), PolicyConfig::new(PolicyName::Ucb)],
    );
    let order: Vec<(String, u64)> = run_experiment(&config)
        .unwrap()
        .into_iter()
        .map(|r| (r.policy, r.trial))
        .collect();
    let expected: Vec<(String, u64)> = ["ts", "ucb"]
        .iter()
        .flat_map(|p| (0..3).map(move |t| (p.to_string(), t)))
        .collect();
    assert_eq!(order, expected);
}

#[test]
fn single_trial_matches_batch() {
    let mut config = ExperimentConfig::new(gaussian(vec![0.2, 0.4, 0.6]), 9000, 3, 77, all_policies());
    config.workers = Some(2);
    let batch = run_experiment(&config).unwrap();
    for (k, p) in config.policies.iter().enumerate() {
        let alone = run_trial(&config, k, 2).unwrap();
        let same = batch.iter().find(|r| r.policy == p.id() && r.trial == 2).unwrap();
        assert_eq!(&alone, same);
    }
}

#[test]
fn timing_mode_does_not_change_decisions() {
    let mut config = ExperimentConfig::new(gaussian(vec![0.2, 0.4]), 500, 2, 3, all_policies());
    let plain = run_experiment(&config).unwrap();
    config.timing_mode = true;
    let timed = run_experiment(&config).unwrap();
    for (a, b) in plain.iter().zip(&timed) {
        assert_eq!(a.action_digest, b.action_digest);
        assert_eq!(a.regret, b.regret);
        assert!(b.timing.is_some());
    }
    let stats = aggregate(&timed);
    assert!(stats
        .iter()
        .all(|s| s.timing.as_ref().is_some_and(|t| t.mean_us() >= 0.0)));
}

#[test]
fn two_arm_fixed_rbmle_favours_the_better_arm() {
    let config = ExperimentConfig::new(
        gaussian(vec![1.0, 0.5]),
        5000,
        4,
        11,
        vec![PolicyConfig::rbmle_fixed(2.0)],
    );
    for r in run_experiment(&config).unwrap() {
        assert!(r.pulls[0] > 4 * r.pulls[1], "{:?}", r.pulls);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn regret_curves_are_monotone_and_bounded(
        means in prop::collection::vec(-1.0f64..1.0, 2..6),
        seed in any::<u64>(),
        horizon in 10u64..400,
    ) {
        let mut means = means;
        means[0] = means.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 0.05;
        let instance = gaussian(means);
        let max_gap = instance.gaps().iter().cloned().fold(0.0, f64::max);
        let config = ExperimentConfig::new(instance.clone(), horizon, 1, seed, all_policies());
        for r in run_experiment(&config).unwrap() {
            prop_assert!(r.regret.windows(2).all(|w| w[1] >= w[0] - 1e-12));
            prop_assert!(r.final_regret <= max_gap * horizon as f64 + 1e-9);
            prop_assert_eq!(*r.checkpoints.last().unwrap(), horizon);
            if r.policy == "oracle" {
                let init: f64 = instance.gaps().iter().sum();
                prop_assert!((r.final_regret - init).abs() < 1e-9);
            }
        }
    }
}

/// With one initial pull per arm every Bernoulli arm starts at p = 0 or 1,
/// whose clipped index N H(p) is 0 once alpha >= 1. The first arm to see both
/// outcomes gets a positive index and is never displaced.
#[test]
fn bernoulli_rbmle_locks_onto_first_mixed_arm() {
    let instance = BanditInstance::new(
        FamilySpec::bernoulli(),
        vec![0.66, 0.67, 0.68, 0.69, 0.7, 0.61, 0.62, 0.63, 0.64, 0.65],
    )
    .unwrap();
    let config = ExperimentConfig::new(instance, 3000, 4, 5, vec![PolicyConfig::new(PolicyName::Rbmle)]);
    for r in run_experiment(&config).unwrap() {
        let locked = r.pulls.iter().filter(|&&n| n > 1).count();
        assert_eq!(locked, 1, "{:?}", r.pulls);
        assert_eq!(r.pulls[0], 3000 - 9);
    }
}
