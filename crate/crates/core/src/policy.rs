//! Runnable policies and their configuration.
//!
//! A policy only sees its own observations. The harness performs the
//! round-robin initialisation (arm `i` at step `i + 1`) through
//! [`Policy::observe`] and calls [`Policy::select`] from step `N + 1` on.

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::baselines::{
    bucb_index, gpucb_beta, gpucb_index, gpucbt_beta, klucb_index, moss_index, ucb_index, ucbt_index, BaselineConfig,
    PosteriorState,
};
use crate::env::BanditInstance;
use crate::error::{Error, Result};
use crate::family::{FamilyKind, FamilySpec};
use crate::rbmle::{closed_form_index, generic_index, select_arm, ArmStats, BetaFn, BiasSchedule, IndexRoute};
use crate::rng;

pub trait Policy: Send {
    /// Arm to pull at step `t`; every arm has been observed at least once.
    fn select(&mut self, t: u64) -> Result<usize>;
    fn observe(&mut self, arm: usize, reward: f64);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyName {
    Rbmle,
    Ucb,
    Ucbt,
    Moss,
    Klucb,
    Ts,
    Bucb,
    Gpucb,
    Gpucbt,
    /// Always plays the best arm after initialisation.
    Oracle,
}

impl PolicyName {
    pub const ALL: [PolicyName; 10] = [
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
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            PolicyName::Rbmle => "rbmle",
            PolicyName::Ucb => "ucb",
            PolicyName::Ucbt => "ucbt",
            PolicyName::Moss => "moss",
            PolicyName::Klucb => "klucb",
            PolicyName::Ts => "ts",
            PolicyName::Bucb => "bucb",
            PolicyName::Gpucb => "gpucb",
            PolicyName::Gpucbt => "gpucbt",
            PolicyName::Oracle => "oracle",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.as_str() == s)
    }

    /// Parameters this policy accepts.
    fn accepted(&self) -> &'static [&'static str] {
        match self {
            PolicyName::Rbmle => &[
                "c_alpha",
                "epsilon",
                "beta",
                "kappa",
                "rho",
                "include_n_plus_2",
                "literal_radius",
                "index",
            ],
            PolicyName::Klucb => &["c", "max_iter"],
            PolicyName::Bucb | PolicyName::Gpucbt => &["c"],
            PolicyName::Gpucb => &["delta"],
            _ => &[],
        }
    }
}

/// Union of all policy parameters; each policy accepts a subset.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PolicyParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<BetaFn>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub include_n_plus_2: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub literal_radius: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<IndexRoute>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
}

impl PolicyParams {
    fn set_fields(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let mut mark = |set: bool, name| {
            if set {
                out.push(name)
            }
        };
        mark(self.c_alpha.is_some(), "c_alpha");
        mark(self.epsilon.is_some(), "epsilon");
        mark(self.beta.is_some(), "beta");
        mark(self.kappa.is_some(), "kappa");
        mark(self.rho.is_some(), "rho");
        mark(self.include_n_plus_2.is_some(), "include_n_plus_2");
        mark(self.literal_radius.is_some(), "literal_radius");
        mark(self.index.is_some(), "index");
        mark(self.c.is_some(), "c");
        mark(self.delta.is_some(), "delta");
        mark(self.max_iter.is_some(), "max_iter");
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyConfig {
    pub name: PolicyName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default)]
    pub params: PolicyParams,
}

impl PolicyConfig {
    pub fn new(name: PolicyName) -> Self {
        Self {
            name,
            label: None,
            params: PolicyParams::default(),
        }
    }

    pub fn rbmle_fixed(c_alpha: f64) -> Self {
        let mut cfg = Self::new(PolicyName::Rbmle);
        cfg.params.c_alpha = Some(c_alpha);
        cfg
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Identifier used in result files.
    pub fn id(&self) -> &str {
        self.label.as_deref().unwrap_or(self.name.as_str())
    }

    /// The bias schedule an RBMLE policy would use on `spec`.
    pub fn rbmle_schedule(&self, spec: &FamilySpec) -> Result<BiasSchedule> {
        let p = &self.params;
        let beta = p.beta.unwrap_or_default();
        let epsilon = p.epsilon.unwrap_or(0.25);
        let schedule = match (p.c_alpha, spec.kind) {
            (Some(c_alpha), _) => BiasSchedule::Fixed { c_alpha },
            (None, FamilyKind::Gaussian { sigma }) => BiasSchedule::AdaptiveGaussian {
                sigma,
                beta,
                include_n_plus_2: p.include_n_plus_2.unwrap_or(true),
            },
            (None, FamilyKind::Bernoulli) => BiasSchedule::AdaptiveBernoulli { epsilon, beta },
            (None, FamilyKind::Exponential) => BiasSchedule::AdaptiveExponential {
                kappa: p.kappa.unwrap_or(10.0),
                rho: p.rho.unwrap_or(10.0),
                epsilon,
                beta,
                literal_radius: p.literal_radius.unwrap_or(true),
            },
        };
        schedule.validate()?;
        Ok(schedule)
    }

    pub fn validate(&self, spec: &FamilySpec) -> Result<()> {
        let accepted = self.name.accepted();
        if let Some(field) = self.params.set_fields().into_iter().find(|f| !accepted.contains(f)) {
            return Err(Error::config(
                format!("policies.{}.params.{field}", self.id()),
                format!("not a parameter of `{}`", self.name.as_str()),
            ));
        }
        match self.name {
            PolicyName::Rbmle => {
                self.rbmle_schedule(spec)?;
            }
            PolicyName::Gpucb | PolicyName::Gpucbt if spec.sigma().is_none() => {
                return Err(Error::config(
                    format!("policies.{}", self.id()),
                    format!("`{}` applies to Gaussian bandits only", self.name.as_str()),
                ));
            }
            _ => {}
        }
        if let Some(d) = self.params.delta {
            if !(d > 0.0 && d < 1.0) {
                return Err(Error::invalid("delta", format!("must lie in (0, 1), got {d}")));
            }
        }
        Ok(())
    }

    fn baseline_config(&self) -> BaselineConfig {
        let d = BaselineConfig::default();
        let p = &self.params;
        BaselineConfig {
            klucb_c: p.c.unwrap_or(d.klucb_c),
            bucb_c: p.c.unwrap_or(d.bucb_c),
            gpucb_delta: p.delta.unwrap_or(d.gpucb_delta),
            gpucbt_c: p.c.unwrap_or(d.gpucbt_c),
            max_iter: p.max_iter.unwrap_or(d.max_iter),
        }
    }
}

/// Builds a fresh policy for one trial. Sampling policies draw from the
/// stream keyed by `(seed, trial)`.
pub fn build_policy(
    config: &PolicyConfig,
    instance: &BanditInstance,
    horizon: u64,
    seed: u64,
    trial: u64,
) -> Result<Box<dyn Policy>> {
    let spec = instance.family;
    config.validate(&spec)?;
    let n_arms = instance.n_arms();
    let bc = config.baseline_config();
    let stats = vec![ArmStats::default(); n_arms];
    let posteriors = vec![PosteriorState::prior(&spec); n_arms];
    let bayes = |kind| -> Box<dyn Policy> {
        Box::new(BayesPolicy {
            kind,
            posteriors: posteriors.clone(),
            indices: vec![0.0; n_arms],
        })
    };
    Ok(match config.name {
        PolicyName::Rbmle => Box::new(RbmlePolicy::new(
            spec,
            n_arms,
            config.rbmle_schedule(&spec)?,
            config.params.index.unwrap_or_default(),
        )),
        PolicyName::Ucb => Box::new(FrequentistPolicy::new(FrequentistKind::Ucb, stats)),
        PolicyName::Ucbt => Box::new(FrequentistPolicy::new(FrequentistKind::Ucbt, stats)),
        PolicyName::Moss => Box::new(FrequentistPolicy::new(FrequentistKind::Moss { horizon }, stats)),
        PolicyName::Klucb => Box::new(FrequentistPolicy::new(
            FrequentistKind::Klucb {
                spec,
                c: bc.klucb_c,
                max_iter: bc.max_iter,
            },
            stats,
        )),
        PolicyName::Ts => bayes(BayesKind::Thompson {
            rng: Box::new(rng::policy_rng(seed, trial)),
        }),
        PolicyName::Bucb => bayes(BayesKind::BayesUcb { horizon, c: bc.bucb_c }),
        PolicyName::Gpucb => bayes(BayesKind::GpUcb { delta: bc.gpucb_delta }),
        PolicyName::Gpucbt => bayes(BayesKind::GpUcbTuned { c: bc.gpucbt_c }),
        PolicyName::Oracle => Box::new(OraclePolicy {
            best: instance.best_arm(),
        }),
    })
}

/// RBMLE with any bias schedule.
pub struct RbmlePolicy {
    spec: FamilySpec,
    stats: Vec<ArmStats>,
    schedule: BiasSchedule,
    route: IndexRoute,
    indices: Vec<f64>,
}

impl RbmlePolicy {
    pub fn new(spec: FamilySpec, n_arms: usize, schedule: BiasSchedule, route: IndexRoute) -> Self {
        Self {
            spec,
            stats: vec![ArmStats::default(); n_arms],
            schedule,
            route,
            indices: vec![0.0; n_arms],
        }
    }

    pub fn stats(&self) -> &[ArmStats] {
        &self.stats
    }
}

impl Policy for RbmlePolicy {
    fn select(&mut self, t: u64) -> Result<usize> {
        let alpha = self.schedule.alpha(&self.spec, &self.stats, t)?;
        for (slot, s) in self.indices.iter_mut().zip(&self.stats) {
            *slot = match self.route {
                IndexRoute::ClosedForm => closed_form_index(&self.spec, s, alpha),
                IndexRoute::Generic => {
                    let nu = self.spec.clip(s.empirical_mean());
                    generic_index(&self.spec, nu, s.pulls, alpha)?
                }
            };
        }
        Ok(select_arm(&self.indices))
    }

    fn observe(&mut self, arm: usize, reward: f64) {
        self.stats[arm].record(reward);
    }
}

enum FrequentistKind {
    Ucb,
    Ucbt,
    Moss { horizon: u64 },
    Klucb { spec: FamilySpec, c: f64, max_iter: usize },
}

struct FrequentistPolicy {
    kind: FrequentistKind,
    stats: Vec<ArmStats>,
    indices: Vec<f64>,
}

impl FrequentistPolicy {
    fn new(kind: FrequentistKind, stats: Vec<ArmStats>) -> Self {
        let n = stats.len();
        Self {
            kind,
            stats,
            indices: vec![0.0; n],
        }
    }
}

impl Policy for FrequentistPolicy {
    fn select(&mut self, t: u64) -> Result<usize> {
        let n_arms = self.stats.len();
        for (slot, s) in self.indices.iter_mut().zip(&self.stats) {
            *slot = match self.kind {
                FrequentistKind::Ucb => ucb_index(s, t),
                FrequentistKind::Ucbt => ucbt_index(s, t),
                FrequentistKind::Moss { horizon } => moss_index(s, horizon, n_arms),
                FrequentistKind::Klucb { spec, c, max_iter } => klucb_index(&spec, s, t, c, max_iter)?,
            };
        }
        Ok(select_arm(&self.indices))
    }

    fn observe(&mut self, arm: usize, reward: f64) {
        self.stats[arm].record(reward);
    }
}

enum BayesKind {
    Thompson { rng: Box<ChaCha8Rng> },
    BayesUcb { horizon: u64, c: f64 },
    GpUcb { delta: f64 },
    GpUcbTuned { c: f64 },
}

struct BayesPolicy {
    kind: BayesKind,
    posteriors: Vec<PosteriorState>,
    indices: Vec<f64>,
}

impl Policy for BayesPolicy {
    fn select(&mut self, t: u64) -> Result<usize> {
        let n_arms = self.posteriors.len();
        for (slot, post) in self.indices.iter_mut().zip(&self.posteriors) {
            *slot = match &mut self.kind {
                BayesKind::Thompson { rng } => post.sample(rng.as_mut()),
                BayesKind::BayesUcb { horizon, c } => bucb_index(post, t, *horizon, *c),
                BayesKind::GpUcb { delta } => gpucb_index(post, gpucb_beta(n_arms, t, *delta))
                    .ok_or_else(|| Error::invalid("family", "GP-UCB needs Gaussian arms"))?,
                BayesKind::GpUcbTuned { c } => gpucb_index(post, gpucbt_beta(t, *c))
                    .ok_or_else(|| Error::invalid("family", "GP-UCB needs Gaussian arms"))?,
            };
        }
        Ok(select_arm(&self.indices))
    }

    fn observe(&mut self, arm: usize, reward: f64) {
        self.posteriors[arm].update(reward);
    }
}

struct OraclePolicy {
    best: usize,
}

impl Policy for OraclePolicy {
    fn select(&mut self, _t: u64) -> Result<usize> {
        Ok(self.best)
    }

    fn observe(&mut self, _arm: usize, _reward: f64) {}
}
