//! Minimum bias constants and closed-form regret upper bounds for the fixed
//! schedule `alpha(t) = C_alpha log t`, plus the adaptive Gaussian bound.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{FamilySpec, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::rbmle::schedule::BetaFn;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundVariant {
    /// General exponential family with a known lower bound on the means.
    ExpFamily,
    /// (Sub-)Gaussian rewards with variance proxy `sigma^2`.
    Gaussian,
    /// `(rho, kappa)`-sub-exponential rewards on the positive half line.
    SubExponential,
    /// Adaptive Gaussian schedule `alpha(t) = min(C_hat(t), beta(t)) log t`.
    AdaptiveGaussian,
}

impl BoundVariant {
    pub const ALL: [BoundVariant; 4] = [
        BoundVariant::ExpFamily,
        BoundVariant::Gaussian,
        BoundVariant::SubExponential,
        BoundVariant::AdaptiveGaussian,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BoundVariant::ExpFamily => "exp_family",
            BoundVariant::Gaussian => "gaussian",
            BoundVariant::SubExponential => "sub_exponential",
            BoundVariant::AdaptiveGaussian => "adaptive_gaussian",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.name() == name)
    }
}

/// Tail parameters the variants need beyond the family itself.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundParams {
    /// Variance proxy; defaults to the family's `sigma` when absent.
    pub sigma: Option<f64>,
    pub kappa: f64,
    pub rho: f64,
    pub beta: BetaFn,
}

impl Default for BoundParams {
    fn default() -> Self {
        Self {
            sigma: None,
            kappa: 10.0,
            rho: 10.0,
            beta: BetaFn::default(),
        }
    }
}

impl BoundParams {
    fn sigma(&self, spec: &FamilySpec) -> Result<f64> {
        match self.sigma.or(spec.sigma()) {
            Some(s) if s > 0.0 && s.is_finite() => Ok(s),
            Some(s) => Err(Error::invalid("sigma", format!("must be positive, got {s}"))),
            None => Err(Error::invalid("sigma", "required for this bound variant")),
        }
    }
}

/// Best mean, and the gaps `Delta_a` of the sub-optimal arms in arm order.
struct Gaps {
    best: f64,
    min_gap: f64,
    suboptimal: Vec<(f64, f64)>,
}

fn gaps(spec: &FamilySpec, means: &[f64]) -> Result<Gaps> {
    if means.len() < 2 {
        return Err(Error::invalid("means", "need at least two arms"));
    }
    for &m in means {
        if !spec.in_closure(m) {
            return Err(Error::Domain {
                what: "mean",
                value: m,
                domain: "the family's mean domain",
            });
        }
    }
    let best = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if means.iter().filter(|&&m| m == best).count() > 1 {
        return Err(Error::invalid("means", "the best mean must be unique"));
    }
    let suboptimal: Vec<(f64, f64)> = means.iter().filter(|&&m| m < best).map(|&m| (m, best - m)).collect();
    let min_gap = suboptimal.iter().map(|&(_, d)| d).fold(f64::INFINITY, f64::min);
    Ok(Gaps {
        best,
        min_gap,
        suboptimal,
    })
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("epsilon", format!("must lie in (0, 1), got {epsilon}")))
    }
}

fn k_star(spec: &FamilySpec, hi: f64, lo: f64) -> Result<f64> {
    spec.k_star(hi, lo, DEFAULT_TOL, DEFAULT_MAX_ITER)
}

/// Smallest `C_alpha` for which the variant's regret guarantee holds.
///
/// For [`BoundVariant::AdaptiveGaussian`] this is the level
/// `256 sigma^2 (N+2) / Delta` that `beta(t)` must reach.
pub fn theoretical_c_alpha_min(
    spec: &FamilySpec,
    means: &[f64],
    epsilon: f64,
    variant: BoundVariant,
    params: &BoundParams,
) -> Result<f64> {
    let g = gaps(spec, means)?;
    let delta = g.min_gap;
    let n_arms = means.len() as f64;
    match variant {
        BoundVariant::ExpFamily => {
            check_epsilon(epsilon)?;
            let anchor = g.best - epsilon * delta / 2.0;
            let d = spec.kl_div(anchor, g.best)?;
            let k = k_star(spec, anchor, spec.theta_lower)?;
            Ok(4.0 / (d * k))
        }
        BoundVariant::Gaussian => {
            let s = params.sigma(spec)?;
            Ok(256.0 * s * s / delta)
        }
        BoundVariant::SubExponential => {
            check_epsilon(epsilon)?;
            let gap = epsilon * delta;
            let k = k_star(spec, g.best - gap / 2.0, spec.theta_lower)?;
            Ok(16.0 * (params.kappa * gap + 2.0 * params.rho * params.rho) / (gap * gap * k))
        }
        BoundVariant::AdaptiveGaussian => {
            let s = params.sigma(spec)?;
            Ok(256.0 * s * s * (n_arms + 2.0) / delta)
        }
    }
}

/// Regret upper bound at horizon `horizon`, summed over sub-optimal arms.
/// `c_alpha` is ignored by [`BoundVariant::AdaptiveGaussian`].
pub fn theoretical_regret_bound(
    spec: &FamilySpec,
    means: &[f64],
    c_alpha: f64,
    epsilon: f64,
    horizon: f64,
    variant: BoundVariant,
    params: &BoundParams,
) -> Result<f64> {
    if !(horizon >= 1.0) {
        return Err(Error::invalid("horizon", format!("must be at least 1, got {horizon}")));
    }
    if variant != BoundVariant::AdaptiveGaussian && !(c_alpha >= 0.0) {
        return Err(Error::invalid("c_alpha", format!("must be nonnegative, got {c_alpha}")));
    }
    let g = gaps(spec, means)?;
    let log_t = horizon.ln();
    let pi2 = PI * PI;
    let n_arms = means.len() as f64;

    let mut total = 0.0;
    match variant {
        BoundVariant::ExpFamily => {
            check_epsilon(epsilon)?;
            for &(theta_a, delta_a) in &g.suboptimal {
                let shift = epsilon * delta_a / 2.0;
                let d = spec.kl_div(theta_a + shift, theta_a)?;
                let k = k_star(spec, g.best - shift, theta_a + shift)?;
                let lead = (4.0 / d).max(c_alpha * k);
                total += delta_a * (lead * log_t + 1.0 + pi2 / 3.0);
            }
        }
        BoundVariant::Gaussian => {
            for &(_, delta_a) in &g.suboptimal {
                total += delta_a * (2.0 / delta_a * c_alpha * log_t + 2.0 * pi2 / 3.0);
            }
        }
        BoundVariant::SubExponential => {
            check_epsilon(epsilon)?;
            let numerator = 16.0 * (params.kappa * epsilon * g.min_gap + 2.0 * params.rho * params.rho);
            for &(theta_a, delta_a) in &g.suboptimal {
                let shift = epsilon * delta_a / 2.0;
                let k = k_star(spec, g.best - shift, theta_a + shift)?;
                let lead = (numerator / (epsilon * delta_a).powi(2)).max(c_alpha * k);
                total += delta_a * (1.0 + pi2 / 3.0 + lead * log_t);
            }
        }
        BoundVariant::AdaptiveGaussian => {
            let s = params.sigma(spec)?;
            params.beta.validate()?;
            let delta = g.min_gap;
            let t0 = params.beta.first_time_at_least(256.0 * s * s * (n_arms + 2.0) / delta);
            let lead = (1024.0 * s * s * (n_arms + 2.0) / (delta * delta) * log_t).max(t0);
            for &(_, delta_a) in &g.suboptimal {
                total += delta_a * (lead + n_arms * pi2 / 3.0);
            }
        }
    }
    Ok(total)
}
