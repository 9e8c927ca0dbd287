//! Bandit instances and pre-drawn reward tables.
//!
//! Entry `(t, arm)` of a table is the reward `arm` would pay if pulled at
//! step `t`. It depends only on `(seed, trial, arm, t)` and the arm's own
//! distribution, so every policy in a trial sees the same sample path and
//! changing one arm never disturbs the others.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{FamilyKind, FamilySpec};
use crate::rng;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BanditInstance {
    pub family: FamilySpec,
    pub means: Vec<f64>,
}

impl BanditInstance {
    /// Validates the means and requires a unique best arm.
    pub fn new(family: FamilySpec, means: Vec<f64>) -> Result<Self> {
        family.validate()?;
        if means.is_empty() {
            return Err(Error::invalid("means", "need at least one arm"));
        }
        for &m in &means {
            let ok = match family.kind {
                FamilyKind::Exponential => m > 0.0 && m.is_finite(),
                _ => family.in_closure(m),
            };
            if !ok {
                return Err(Error::Domain {
                    what: "mean",
                    value: m,
                    domain: match family.kind {
                        FamilyKind::Bernoulli => "[0, 1]",
                        FamilyKind::Gaussian { .. } => "the real line",
                        FamilyKind::Exponential => "(0, inf)",
                    },
                });
            }
        }
        let best = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if means.iter().filter(|&&m| m == best).count() > 1 {
            return Err(Error::invalid(
                "means",
                format!("best mean {best} is shared by several arms"),
            ));
        }
        Ok(Self { family, means })
    }

    /// Exponential arms given by their rates `lambda_i`, mean `1 / lambda_i`.
    pub fn exponential_from_rates(family: FamilySpec, rates: &[f64]) -> Result<Self> {
        if let Some(&r) = rates.iter().find(|&&r| !(r > 0.0 && r.is_finite())) {
            return Err(Error::invalid("rates", format!("must be positive, got {r}")));
        }
        Self::new(family, rates.iter().map(|r| 1.0 / r).collect())
    }

    pub fn n_arms(&self) -> usize {
        self.means.len()
    }

    pub fn best_arm(&self) -> usize {
        crate::rbmle::select_arm(&self.means)
    }

    pub fn best_mean(&self) -> f64 {
        self.means[self.best_arm()]
    }

    /// `Delta_a = theta* - theta_a` for every arm (0 for the best one).
    pub fn gaps(&self) -> Vec<f64> {
        let best = self.best_mean();
        self.means.iter().map(|m| best - m).collect()
    }

    /// Smallest positive gap; `None` for a single arm.
    pub fn min_gap(&self) -> Option<f64> {
        self.gaps()
            .into_iter()
            .filter(|&d| d > 0.0)
            .fold(None, |acc, d| Some(acc.map_or(d, |a: f64| a.min(d))))
    }

    /// The reward of `arm` at step `t` (1-based) in `trial`.
    pub fn draw(&self, seed: u64, trial: u64, arm: usize, t: u64) -> f64 {
        let mean = self.means[arm];
        let u = rng::uniform(seed, trial, arm as u64, t, 0);
        match self.family.kind {
            FamilyKind::Bernoulli => {
                if u < mean {
                    1.0
                } else {
                    0.0
                }
            }
            FamilyKind::Gaussian { sigma } => {
                let v = rng::uniform(seed, trial, arm as u64, t, 1);
                mean + sigma * (-2.0 * u.ln()).sqrt() * (TAU * v).cos()
            }
            FamilyKind::Exponential => -u.ln() * mean,
        }
    }
}

/// Rewards for steps `t_start ..= t_start + len - 1`, stored row by row.
#[derive(Clone, Debug, PartialEq)]
pub struct RewardTable {
    pub seed: u64,
    pub trial: u64,
    pub t_start: u64,
    pub len: u64,
    pub horizon: u64,
    pub n_arms: usize,
    values: Vec<f64>,
}

impl RewardTable {
    /// Pure lookup of entry `(t, arm)`.
    pub fn pull(&self, t: u64, arm: usize) -> Result<f64> {
        if t < self.t_start || t >= self.t_start + self.len || t > self.horizon || arm >= self.n_arms {
            return Err(Error::OutOfBounds {
                t,
                arm,
                horizon: self.horizon,
                n_arms: self.n_arms,
            });
        }
        Ok(self.values[(t - self.t_start) as usize * self.n_arms + arm])
    }

    /// Column of one arm in step order.
    pub fn column(&self, arm: usize) -> Vec<f64> {
        self.values.iter().skip(arm).step_by(self.n_arms).copied().collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Full table for steps `1..=horizon`.
pub fn generate_table(instance: &BanditInstance, horizon: u64, seed: u64, trial: u64) -> Result<RewardTable> {
    generate_chunk(instance, horizon, seed, trial, 1, horizon)
}

/// Rows `t_start .. t_start + len` of the table, clipped to the horizon.
/// Concatenating chunks reproduces [`generate_table`] exactly.
pub fn generate_chunk(
    instance: &BanditInstance,
    horizon: u64,
    seed: u64,
    trial: u64,
    t_start: u64,
    len: u64,
) -> Result<RewardTable> {
    if horizon == 0 {
        return Err(Error::invalid("horizon", "must be at least 1"));
    }
    if t_start == 0 || t_start > horizon {
        return Err(Error::invalid(
            "t_start",
            format!("must lie in 1..={horizon}, got {t_start}"),
        ));
    }
    let len = len.min(horizon - t_start + 1);
    let n_arms = instance.n_arms();
    let mut values = Vec::with_capacity(len as usize * n_arms);
    for t in t_start..t_start + len {
        for arm in 0..n_arms {
            values.push(instance.draw(seed, trial, arm, t));
        }
    }
    Ok(RewardTable {
        seed,
        trial,
        t_start,
        len,
        horizon,
        n_arms,
        values,
    })
}
