//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fail.

use std::time::{Duration, Instant};

use banditlab::env::BanditInstance;
use banditlab::harness::{aggregate, mean_curve, run_experiment, scalability_sweep, ExperimentConfig, TrialResult};
use banditlab::policy::{PolicyConfig, PolicyName};
use banditlab::rbmle::{theoretical_regret_bound, BoundParams, BoundVariant, IndexRoute};
use banditlab::verify::{concentration_suite, equivalence_suite, kstar_suite, lemma_suite, max_equivalence_gap};
use banditlab::FamilySpec;

const SEED: u64 = 20240601;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn mean_final(results: &[TrialResult], id: &str) -> f64 {
    aggregate(results)
        .into_iter()
        .find(|s| s.policy == id)
        .map(|s| s.mean)
        .unwrap_or(f64::NAN)
}

fn bernoulli_10arm() -> BanditInstance {
    let means = vec![0.66, 0.67, 0.68, 0.69, 0.7, 0.61, 0.62, 0.63, 0.64, 0.65];
    BanditInstance::new(FamilySpec::bernoulli(), means).unwrap()
}

fn gaussian_10arm() -> BanditInstance {
    let means = vec![0.41, 0.52, 0.66, 0.43, 0.58, 0.65, 0.48, 0.67, 0.59, 0.63];
    BanditInstance::new(FamilySpec::gaussian(1.0).unwrap(), means).unwrap()
}

fn two_arm() -> BanditInstance {
    BanditInstance::new(FamilySpec::gaussian(1.0).unwrap(), vec![1.0, 0.5]).unwrap()
}

/// Fixed bias constant `256 sigma^2 / Delta` for the two-arm instance.
const TWO_ARM_C_ALPHA: f64 = 256.0 * 1.0 / 0.5;

fn equivalence() -> Outcome {
    let start = Instant::now();
    let report = equivalence_suite();
    let gaps: Vec<f64> = [
        FamilySpec::bernoulli(),
        FamilySpec::gaussian(1.0).unwrap(),
        FamilySpec::gaussian(0.5).unwrap(),
        FamilySpec::exponential(),
    ]
    .iter()
    .map(max_equivalence_gap)
    .collect();
    let worst = gaps.iter().cloned().fold(0.0, f64::max);
    let elapsed = start.elapsed();
    outcome(
        report.passed() && worst <= 1e-9 && elapsed < Duration::from_secs(1),
        format!("max gap {worst:.3e} (limit 1e-9), {:.3} s (limit 1 s)", secs(elapsed)),
    )
}

fn lemmas() -> Outcome {
    let start = Instant::now();
    let report = lemma_suite();
    let elapsed = start.elapsed();
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    outcome(
        report.passed() && elapsed < Duration::from_secs(30),
        format!(
            "{} checks, {failed} failing, {:.2} s (limit 30 s)",
            report.checks.len(),
            secs(elapsed)
        ),
    )
}

fn k_star() -> Outcome {
    let start = Instant::now();
    let report = kstar_suite(SEED);
    let elapsed = start.elapsed();
    let detail: Vec<&str> = report.checks.iter().map(|c| c.detail.as_str()).collect();
    outcome(
        report.passed() && elapsed < Duration::from_secs(10),
        format!("{}; {:.2} s (limit 10 s)", detail.join("; "), secs(elapsed)),
    )
}

fn bernoulli_ordering() -> Outcome {
    let start = Instant::now();
    let policies = vec![PolicyConfig::new(PolicyName::Rbmle), PolicyConfig::new(PolicyName::Ucb)];
    let config = ExperimentConfig::new(bernoulli_10arm(), 10_000, 50, SEED, policies);
    let results = run_experiment(&config).unwrap();
    let rbmle = mean_final(&results, "rbmle");
    let ucb = mean_final(&results, "ucb");
    let elapsed = start.elapsed();
    outcome(
        rbmle < 0.6 * ucb && elapsed < Duration::from_secs(300),
        format!(
            "rbmle {rbmle:.1} vs ucb {ucb:.1} (ratio {:.3}, limit 0.6), {:.1} s",
            rbmle / ucb,
            secs(elapsed)
        ),
    )
}

fn gaussian_ordering() -> Outcome {
    let start = Instant::now();
    let policies = vec![
        PolicyConfig::new(PolicyName::Rbmle),
        PolicyConfig::new(PolicyName::Gpucb),
    ];
    let config = ExperimentConfig::new(gaussian_10arm(), 10_000, 50, SEED, policies);
    let results = run_experiment(&config).unwrap();
    let rbmle = mean_final(&results, "rbmle");
    let gpucb = mean_final(&results, "gpucb");
    let elapsed = start.elapsed();
    outcome(
        rbmle < gpucb && elapsed < Duration::from_secs(300),
        format!("rbmle {rbmle:.1} vs gpucb {gpucb:.1}, {:.1} s", secs(elapsed)),
    )
}

fn two_arm_results() -> (ExperimentConfig, Vec<TrialResult>) {
    let mut config = ExperimentConfig::new(
        two_arm(),
        10_000,
        50,
        SEED,
        vec![PolicyConfig::rbmle_fixed(TWO_ARM_C_ALPHA)],
    );
    config.checkpoints = vec![10, 100, 1_000, 2_000, 5_000, 10_000];
    let results = run_experiment(&config).unwrap();
    (config, results)
}

fn log_growth(results: &[TrialResult]) -> Outcome {
    let curve = mean_curve(results, "rbmle");
    let at = |t: u64| curve.iter().find(|(c, _)| *c == t).map(|(_, r)| *r).unwrap();
    let (r3, r4) = (at(1_000), at(10_000));
    let ratio = r4 / r3;
    outcome(
        ratio < 3.0,
        format!("regret(1e3) {r3:.1}, regret(1e4) {r4:.1}, ratio {ratio:.3} (limit 3)"),
    )
}

fn bound_dominance(config: &ExperimentConfig, results: &[TrialResult]) -> Outcome {
    let spec = config.instance.family;
    let means = &config.instance.means;
    let params = BoundParams::default();
    let bound = |t: u64| {
        theoretical_regret_bound(
            &spec,
            means,
            TWO_ARM_C_ALPHA,
            0.25,
            t as f64,
            BoundVariant::Gaussian,
            &params,
        )
        .unwrap()
    };
    // The full set of trials plus five batches of ten.
    let mut batches: Vec<Vec<&TrialResult>> = vec![results.iter().collect()];
    batches.extend(results.chunks(10).map(|c| c.iter().collect()));
    let mut worst_margin = f64::INFINITY;
    let mut violations = 0;
    for batch in &batches {
        for (k, &t) in config.checkpoints.iter().enumerate() {
            let mean = batch.iter().map(|r| r.regret[k]).sum::<f64>() / batch.len() as f64;
            let b = bound(t);
            worst_margin = worst_margin.min(b / mean.max(f64::MIN_POSITIVE));
            // a NaN on either side counts as a violation
            if b.partial_cmp(&mean) != Some(std::cmp::Ordering::Greater) {
                violations += 1;
            }
        }
    }
    outcome(
        violations == 0,
        format!(
            "{} batches x {} checkpoints, {violations} violations, smallest bound/regret {worst_margin:.2}",
            batches.len(),
            config.checkpoints.len()
        ),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    std::fs::write(
        &config,
        r#"{
  "instance": {"family": "bernoulli", "means": [0.66, 0.67, 0.68, 0.69, 0.7, 0.61, 0.62, 0.63, 0.64, 0.65]},
  "horizon": 2000, "trials": 8, "seed": 11,
  "policies": [{"name": "rbmle"}, {"name": "ucb"}, {"name": "klucb"}, {"name": "ts"}, {"name": "bucb"}]
}"#,
    )
    .unwrap();
    let mut outputs = Vec::new();
    for (run, workers) in [("a", "1"), ("b", "4")] {
        let out = dir.path().join(run);
        let code = banditlab::cli::run_cli([
            "banditlab",
            "run",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--workers",
            workers,
        ]);
        if code != 0 {
            return outcome(false, format!("run {run} exited with {code}"));
        }
        let read = |name: &str| std::fs::read(out.join(name)).unwrap();
        outputs.push((read("summary.csv"), read("curves.csv")));
    }
    let same = outputs[0] == outputs[1];
    outcome(
        same,
        format!(
            "summary {} bytes, curves {} bytes, identical across 1 and 4 workers: {same}",
            outputs[0].0.len(),
            outputs[0].1.len()
        ),
    )
}

fn timing() -> Outcome {
    let mut rbmle = PolicyConfig::rbmle_fixed(TWO_ARM_C_ALPHA);
    rbmle.params.index = Some(IndexRoute::ClosedForm);
    let mut base = ExperimentConfig::new(
        gaussian_10arm(),
        5_000,
        4,
        SEED,
        vec![rbmle, PolicyConfig::new(PolicyName::Ucb)],
    );
    base.timing_mode = true;
    let rows = scalability_sweep(&base, &[10, 70]).unwrap();
    let mut passed = true;
    let mut parts = Vec::new();
    for n in [10, 70] {
        let get = |id: &str| rows.iter().find(|r| r.n_arms == n && r.policy == id).unwrap().mean_us;
        let (r, u) = (get("rbmle"), get("ucb"));
        passed &= r <= 10.0 * u;
        parts.push(format!("N={n}: rbmle {r:.3} us, ucb {u:.3} us, ratio {:.2}", r / u));
    }
    outcome(passed, format!("{} (limit 10)", parts.join("; ")))
}

fn concentration() -> Outcome {
    let report = concentration_suite(SEED);
    let detail: Vec<String> = report
        .checks
        .iter()
        .map(|c| format!("{}: {}", c.name, c.detail))
        .collect();
    outcome(report.passed(), detail.join("; "))
}

fn main() {
    let mut all = true;
    let mut emit = |name: &str, o: Outcome| {
        all &= o.passed;
        println!("{} {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
    };
    emit("closed-form equivalence", equivalence());
    emit("lemma suite", lemmas());
    emit("K* oracle", k_star());
    emit("regret ordering bernoulli", bernoulli_ordering());
    emit("regret ordering gaussian", gaussian_ordering());
    let (config, results) = two_arm_results();
    emit("O(log T) consistency", log_growth(&results));
    emit("bound dominance", bound_dominance(&config, &results));
    emit("determinism", determinism());
    emit("timing sanity", timing());
    emit("concentration", concentration());
    if !all {
        std::process::exit(1);
    }
}
