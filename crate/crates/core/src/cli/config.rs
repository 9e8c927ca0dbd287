//! The JSON experiment file.
//!
//! ```json
//! {
//!   "instance": {"family": "gaussian", "sigma": 1.0, "means": [0.5, "0.4"]},
//!   "horizon": 10000, "trials": 50, "seed": 7,
//!   "policies": [{"name": "rbmle", "params": {"c_alpha": 512}}, {"name": "ucb"}]
//! }
//! ```
//!
//! Means may be written as numbers or decimal strings. Exponential arms may
//! give `rates` instead of `means`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::env::BanditInstance;
use crate::error::{Error, Result};
use crate::family::FamilySpec;
use crate::harness::{default_checkpoints, ExperimentConfig};
use crate::policy::{PolicyConfig, PolicyName};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Float(f64),
    Text(String),
}

impl Number {
    fn value(&self, field: &str) -> Result<f64> {
        match self {
            Number::Float(v) => Ok(*v),
            Number::Text(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::config(field, format!("`{s}` is not a decimal number"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_lower: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub means: Option<Vec<Number>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rates: Option<Vec<Number>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub instance: InstanceFile,
    pub horizon: u64,
    pub trials: u64,
    pub seed: u64,
    pub policies: Vec<PolicyConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoints: Option<Vec<u64>>,
    #[serde(default)]
    pub timing_mode: bool,
    /// Arm counts for a timing sweep written to `timing.csv`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_arms: Option<Vec<usize>>,
}

/// Command-line overrides applied on top of the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub horizon: Option<u64>,
    /// Policy ids or names to keep; unknown names are added with defaults.
    pub policies: Option<Vec<String>>,
    pub workers: Option<usize>,
}

impl InstanceFile {
    pub fn family_spec(&self) -> Result<FamilySpec> {
        let spec = match self.family.as_str() {
            "bernoulli" => FamilySpec::bernoulli(),
            "gaussian" => {
                let sigma = self
                    .sigma
                    .ok_or_else(|| Error::config("instance.sigma", "required for gaussian arms"))?;
                FamilySpec::gaussian(sigma).map_err(|e| Error::config("instance.sigma", e.to_string()))?
            }
            "exponential" => FamilySpec::exponential(),
            other => {
                return Err(Error::config(
                    "instance.family",
                    format!("unknown family `{other}` (bernoulli, gaussian, exponential)"),
                ))
            }
        };
        if self.sigma.is_some() && spec.sigma().is_none() {
            return Err(Error::config("instance.sigma", "only gaussian arms take sigma"));
        }
        match self.theta_lower {
            Some(lower) => spec
                .with_theta_lower(lower)
                .map_err(|e| Error::config("instance.theta_lower", e.to_string())),
            None => Ok(spec),
        }
    }

    pub fn instance(&self) -> Result<BanditInstance> {
        let spec = self.family_spec()?;
        let values = |field: &str, xs: &[Number]| -> Result<Vec<f64>> {
            xs.iter()
                .enumerate()
                .map(|(i, x)| x.value(&format!("instance.{field}[{i}]")))
                .collect()
        };
        let built = match (&self.means, &self.rates) {
            (Some(m), None) => BanditInstance::new(spec, values("means", m)?),
            (None, Some(r)) if self.family == "exponential" => {
                BanditInstance::exponential_from_rates(spec, &values("rates", r)?)
            }
            (None, Some(_)) => return Err(Error::config("instance.rates", "only exponential arms take rates")),
            (Some(_), Some(_)) => return Err(Error::config("instance", "give either means or rates, not both")),
            (None, None) => return Err(Error::config("instance.means", "missing")),
        };
        built.map_err(|e| Error::config("instance.means", e.to_string()))
    }
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(path.display().to_string(), format!("cannot read config: {e}")))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Json(j) => Error::config(path.display().to_string(), j.to_string()),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Resolved experiment with overrides applied and everything validated.
    pub fn resolve(&self, overrides: &Overrides) -> Result<ExperimentConfig> {
        let instance = self.instance.instance()?;
        let horizon = overrides.horizon.unwrap_or(self.horizon);
        let checkpoints = match (&self.checkpoints, overrides.horizon) {
            (Some(cp), None) => cp.clone(),
            (Some(cp), Some(h)) => {
                let mut kept: Vec<u64> = cp.iter().copied().filter(|&t| t < h).collect();
                kept.push(h);
                kept
            }
            (None, _) => default_checkpoints(horizon),
        };
        let policies = match &overrides.policies {
            None => self.policies.clone(),
            Some(wanted) => wanted
                .iter()
                .map(|w| {
                    if let Some(p) = self.policies.iter().find(|p| p.id() == w) {
                        return Ok(p.clone());
                    }
                    if let Some(p) = self.policies.iter().find(|p| p.name.as_str() == w) {
                        return Ok(p.clone());
                    }
                    PolicyName::parse(w)
                        .map(PolicyConfig::new)
                        .ok_or_else(|| Error::config("--policies", format!("unknown policy `{w}`")))
                })
                .collect::<Result<Vec<_>>>()?,
        };
        let config = ExperimentConfig {
            instance,
            horizon,
            trials: overrides.trials.unwrap_or(self.trials),
            seed: overrides.seed.unwrap_or(self.seed),
            policies,
            checkpoints,
            timing_mode: self.timing_mode,
            workers: overrides.workers,
        };
        config.validate().map_err(|e| match e {
            Error::Config { .. } => e,
            other => Error::config("policies", other.to_string()),
        })?;
        if let Some(arms) = &self.sweep_arms {
            if arms.contains(&0) {
                return Err(Error::config("sweep_arms", "arm counts must be positive"));
            }
        }
        Ok(config)
    }
}
