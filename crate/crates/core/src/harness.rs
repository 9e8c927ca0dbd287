//! Trials, pseudo-regret accounting, aggregation and timing sweeps.
//!
//! All policies of a trial advance together over one reward table, which is
//! generated chunk by chunk so memory stays bounded for long horizons. Each
//! arm is pulled once in id order at steps `1..=N`; those pulls count toward
//! regret.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::env::{generate_chunk, BanditInstance};
use crate::error::{Error, Result};
use crate::family::{FamilyKind, FamilySpec};
use crate::policy::{build_policy, Policy, PolicyConfig};

/// Steps per generated reward chunk.
pub const CHUNK_STEPS: u64 = 4096;

pub const QUANTILE_LEVELS: [f64; 6] = [0.10, 0.25, 0.50, 0.75, 0.90, 0.95];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub instance: BanditInstance,
    pub horizon: u64,
    pub trials: u64,
    pub seed: u64,
    pub policies: Vec<PolicyConfig>,
    /// Strictly increasing, ending at the horizon.
    pub checkpoints: Vec<u64>,
    pub timing_mode: bool,
    /// Worker threads for trial-level parallelism; `None` lets rayon decide.
    pub workers: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(instance: BanditInstance, horizon: u64, trials: u64, seed: u64, policies: Vec<PolicyConfig>) -> Self {
        Self {
            instance,
            horizon,
            trials,
            seed,
            policies,
            checkpoints: default_checkpoints(horizon),
            timing_mode: false,
            workers: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::config("horizon", "must be at least 1"));
        }
        if self.trials == 0 {
            return Err(Error::config("trials", "must be at least 1"));
        }
        if self.policies.is_empty() {
            return Err(Error::config("policies", "no policies given"));
        }
        let mut ids: Vec<&str> = self.policies.iter().map(|p| p.id()).collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::config(
                "policies",
                format!("duplicate policy id `{}`; set a label", w[0]),
            ));
        }
        for p in &self.policies {
            p.validate(&self.instance.family)?;
        }
        let cp = &self.checkpoints;
        if cp.is_empty() || cp.windows(2).any(|w| w[0] >= w[1]) || cp[0] == 0 {
            return Err(Error::config(
                "checkpoints",
                "must be strictly increasing positive steps",
            ));
        }
        if *cp.last().unwrap() != self.horizon {
            return Err(Error::config(
                "checkpoints",
                format!("must end at the horizon {}", self.horizon),
            ));
        }
        if self.workers == Some(0) {
            return Err(Error::config("workers", "must be at least 1"));
        }
        Ok(())
    }
}

/// 50 geometrically spaced steps from 10 to `horizon`, rounded, plus the
/// horizon itself.
pub fn default_checkpoints(horizon: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if horizon > 10 {
        let ratio = (horizon as f64 / 10.0).ln();
        for i in 0..50 {
            let t = (10.0 * (ratio * i as f64 / 49.0).exp()).round() as u64;
            out.push(t.clamp(1, horizon));
        }
    }
    out.push(horizon);
    out.dedup();
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TimingAccumulator {
    pub decisions: u64,
    pub sum_us: f64,
    pub sum_sq_us: f64,
}

impl TimingAccumulator {
    pub fn record(&mut self, us: f64) {
        self.decisions += 1;
        self.sum_us += us;
        self.sum_sq_us += us * us;
    }

    pub fn merge(&mut self, other: &TimingAccumulator) {
        self.decisions += other.decisions;
        self.sum_us += other.sum_us;
        self.sum_sq_us += other.sum_sq_us;
    }

    pub fn mean_us(&self) -> f64 {
        if self.decisions == 0 {
            return 0.0;
        }
        self.sum_us / self.decisions as f64
    }

    /// Population standard deviation of the per-decision times.
    pub fn std_us(&self) -> f64 {
        if self.decisions == 0 {
            return 0.0;
        }
        let m = self.mean_us();
        (self.sum_sq_us / self.decisions as f64 - m * m).max(0.0).sqrt()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub policy: String,
    pub trial: u64,
    /// FNV-1a hash of the action sequence.
    pub action_digest: u64,
    pub checkpoints: Vec<u64>,
    /// Pseudo-regret `sum_a Delta_a N_a(t)` at each checkpoint.
    pub regret: Vec<f64>,
    /// `t theta* - sum of collected rewards` at each checkpoint.
    pub reward_regret: Vec<f64>,
    pub final_regret: f64,
    pub pulls: Vec<u64>,
    /// Only populated in timing mode.
    pub timing: Option<TimingAccumulator>,
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// Progress of one policy through one trial.
struct Runner {
    id: String,
    policy: Box<dyn Policy>,
    pulls: Vec<u64>,
    reward_sum: f64,
    incremental_regret: f64,
    digest: u64,
    next_checkpoint: usize,
    regret: Vec<f64>,
    reward_regret: Vec<f64>,
    timing: Option<TimingAccumulator>,
}

impl Runner {
    fn step(&mut self, t: u64, chunk: &crate::env::RewardTable, ctx: &TrialContext) -> Result<()> {
        let n_arms = self.pulls.len() as u64;
        let arm = if t <= n_arms {
            Ok((t - 1) as usize)
        } else if let Some(timing) = self.timing.as_mut() {
            let start = Instant::now();
            let arm = self.policy.select(t);
            timing.record(start.elapsed().as_secs_f64() * 1e6);
            arm
        } else {
            self.policy.select(t)
        }
        .map_err(|e| Error::Policy {
            policy: self.id.clone(),
            t,
            source: Box::new(e),
        })?;
        if arm >= self.pulls.len() {
            return Err(Error::Policy {
                policy: self.id.clone(),
                t,
                source: Box::new(Error::invalid("arm", format!("{arm} is not an arm"))),
            });
        }
        let reward = chunk.pull(t, arm)?;
        self.policy.observe(arm, reward);
        self.pulls[arm] += 1;
        self.reward_sum += reward;
        self.incremental_regret += ctx.gaps[arm];
        for b in (arm as u32).to_le_bytes() {
            self.digest = (self.digest ^ b as u64).wrapping_mul(FNV_PRIME);
        }
        while self.next_checkpoint < ctx.checkpoints.len() && ctx.checkpoints[self.next_checkpoint] == t {
            self.regret.push(ctx.pseudo_regret(&self.pulls));
            self.reward_regret.push(t as f64 * ctx.best - self.reward_sum);
            self.next_checkpoint += 1;
        }
        Ok(())
    }

    fn finish(self, trial: u64, ctx: &TrialContext) -> Result<TrialResult> {
        let final_regret = ctx.pseudo_regret(&self.pulls);
        let tol = 1e-9 * final_regret.abs().max(1.0);
        if (final_regret - self.incremental_regret).abs() > tol {
            return Err(Error::invalid(
                "regret",
                format!(
                    "count-based {final_regret} disagrees with running sum {}",
                    self.incremental_regret
                ),
            ));
        }
        Ok(TrialResult {
            policy: self.id,
            trial,
            action_digest: self.digest,
            checkpoints: ctx.checkpoints.to_vec(),
            regret: self.regret,
            reward_regret: self.reward_regret,
            final_regret,
            pulls: self.pulls,
            timing: self.timing,
        })
    }
}

struct TrialContext<'a> {
    gaps: Vec<f64>,
    best: f64,
    checkpoints: &'a [u64],
}

impl TrialContext<'_> {
    fn pseudo_regret(&self, pulls: &[u64]) -> f64 {
        pulls.iter().zip(&self.gaps).map(|(&n, &d)| n as f64 * d).sum()
    }
}

/// Runs the selected policies (by index into `config.policies`) on one trial.
fn run_policies(config: &ExperimentConfig, which: &[usize], trial: u64) -> Result<Vec<TrialResult>> {
    let instance = &config.instance;
    let ctx = TrialContext {
        gaps: instance.gaps(),
        best: instance.best_mean(),
        checkpoints: &config.checkpoints,
    };
    let mut runners = which
        .iter()
        .map(|&i| {
            let cfg = &config.policies[i];
            Ok(Runner {
                id: cfg.id().to_string(),
                policy: build_policy(cfg, instance, config.horizon, config.seed, trial)?,
                pulls: vec![0; instance.n_arms()],
                reward_sum: 0.0,
                incremental_regret: 0.0,
                digest: FNV_OFFSET,
                next_checkpoint: 0,
                regret: Vec::with_capacity(ctx.checkpoints.len()),
                reward_regret: Vec::with_capacity(ctx.checkpoints.len()),
                timing: config.timing_mode.then(TimingAccumulator::default),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut t_start = 1;
    while t_start <= config.horizon {
        let chunk = generate_chunk(instance, config.horizon, config.seed, trial, t_start, CHUNK_STEPS)?;
        for runner in &mut runners {
            for t in t_start..t_start + chunk.len {
                runner.step(t, &chunk, &ctx)?;
            }
        }
        t_start += chunk.len;
    }
    runners.into_iter().map(|r| r.finish(trial, &ctx)).collect()
}

/// One policy on one trial.
pub fn run_trial(config: &ExperimentConfig, policy: usize, trial: u64) -> Result<TrialResult> {
    config.validate()?;
    if policy >= config.policies.len() {
        return Err(Error::invalid("policy", format!("index {policy} out of range")));
    }
    Ok(run_policies(config, &[policy], trial)?.remove(0))
}

/// All policies on all trials. Results are ordered by policy (config order)
/// and then by trial, independent of scheduling.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<TrialResult>> {
    config.validate()?;
    let all: Vec<usize> = (0..config.policies.len()).collect();
    let run = |trial: u64| run_policies(config, &all, trial);
    let per_trial: Vec<Vec<TrialResult>> = if config.timing_mode || config.workers == Some(1) {
        (0..config.trials).map(run).collect::<Result<_>>()?
    } else {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(w) = config.workers {
            builder = builder.num_threads(w);
        }
        let pool = builder.build().map_err(|e| Error::invalid("workers", e.to_string()))?;
        pool.install(|| (0..config.trials).into_par_iter().map(run).collect::<Result<_>>())?
    };

    let mut by_policy: Vec<Vec<TrialResult>> = vec![Vec::new(); all.len()];
    for trial_results in per_trial {
        for (i, r) in trial_results.into_iter().enumerate() {
            by_policy[i].push(r);
        }
    }
    Ok(by_policy.into_iter().flatten().collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateStats {
    pub policy: String,
    pub trials: usize,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    /// At [`QUANTILE_LEVELS`].
    pub quantiles: [f64; 6],
    pub timing: Option<TimingAccumulator>,
}

/// Quantile by linear interpolation between order statistics at rank
/// `1 + q (n - 1)`. `sorted` must be ascending and non-empty.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// Summary of a set of final regrets.
pub fn summarize(policy: &str, values: &[f64]) -> AggregateStats {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let std = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64).sqrt();
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let quantiles = QUANTILE_LEVELS.map(|q| quantile_sorted(&sorted, q));
    AggregateStats {
        policy: policy.to_string(),
        trials: n,
        mean,
        std,
        quantiles,
        timing: None,
    }
}

/// Per-policy statistics of final regret, in order of first appearance.
pub fn aggregate(results: &[TrialResult]) -> Vec<AggregateStats> {
    let mut order: Vec<&str> = Vec::new();
    for r in results {
        if !order.contains(&r.policy.as_str()) {
            order.push(&r.policy);
        }
    }
    order
        .into_iter()
        .map(|id| {
            let mine: Vec<&TrialResult> = results.iter().filter(|r| r.policy == id).collect();
            let finals: Vec<f64> = mine.iter().map(|r| r.final_regret).collect();
            let mut stats = summarize(id, &finals);
            let mut timing: Option<TimingAccumulator> = None;
            for r in &mine {
                if let Some(t) = &r.timing {
                    timing.get_or_insert_with(Default::default).merge(t);
                }
            }
            stats.timing = timing;
            stats
        })
        .collect()
}

/// Mean regret curve of one policy across trials.
pub fn mean_curve(results: &[TrialResult], policy: &str) -> Vec<(u64, f64)> {
    let mine: Vec<&TrialResult> = results.iter().filter(|r| r.policy == policy).collect();
    let Some(first) = mine.first() else {
        return Vec::new();
    };
    first
        .checkpoints
        .iter()
        .enumerate()
        .map(|(k, &t)| (t, mine.iter().map(|r| r.regret[k]).sum::<f64>() / mine.len() as f64))
        .collect()
}

/// Means for an `n_arms` version of an instance: the best mean is kept and
/// the others step down by the instance's minimum gap, compressed so every
/// mean stays inside the family's domain.
pub fn sweep_means(instance: &BanditInstance, n_arms: usize) -> Vec<f64> {
    let top = instance.best_mean();
    let gap = instance.min_gap().unwrap_or(0.1);
    let floor = match instance.family.kind {
        FamilyKind::Gaussian { .. } => f64::NEG_INFINITY,
        FamilyKind::Bernoulli | FamilyKind::Exponential => 0.0,
    };
    let step = if floor.is_finite() {
        gap.min((top - floor) / n_arms as f64)
    } else {
        gap
    };
    (0..n_arms).map(|i| top - step * i as f64).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub policy: String,
    pub n_arms: usize,
    pub mean_us: f64,
    pub std_us: f64,
}

/// Per-decision timing of every policy for each arm count, measured on one
/// worker.
pub fn scalability_sweep(base: &ExperimentConfig, arm_counts: &[usize]) -> Result<Vec<TimingRow>> {
    let mut rows = Vec::new();
    for &n in arm_counts {
        if n == 0 {
            return Err(Error::invalid("arm_counts", "must be positive"));
        }
        let family: FamilySpec = base.instance.family;
        let instance = BanditInstance::new(family, sweep_means(&base.instance, n))?;
        let config = ExperimentConfig {
            instance,
            timing_mode: true,
            workers: Some(1),
            ..base.clone()
        };
        for stats in aggregate(&run_experiment(&config)?) {
            let timing = stats.timing.unwrap_or_default();
            rows.push(TimingRow {
                policy: stats.policy,
                n_arms: n,
                mean_us: timing.mean_us(),
                std_us: timing.std_us(),
            });
        }
    }
    Ok(rows)
}
