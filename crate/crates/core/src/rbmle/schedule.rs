//! Bias schedules `alpha(t)`.
//!
//! A fixed schedule is `C_alpha log t`. The adaptive schedules estimate the
//! minimum gap from per-arm confidence intervals and set
//! `alpha(t) = min(C_hat(t), beta(t)) log t`, recomputed from scratch at
//! every step.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{FamilySpec, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::rbmle::index::ArmStats;

/// `beta(t) = scale * (log t)^exponent`, strictly increasing and unbounded
/// for positive parameters. The default is `sqrt(log t)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaFn {
    pub scale: f64,
    pub exponent: f64,
}

impl Default for BetaFn {
    fn default() -> Self {
        Self {
            scale: 1.0,
            exponent: 0.5,
        }
    }
}

impl BetaFn {
    pub fn validate(&self) -> Result<()> {
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::invalid(
                "beta.scale",
                format!("must be positive, got {}", self.scale),
            ));
        }
        if !(self.exponent > 0.0 && self.exponent.is_finite()) {
            return Err(Error::invalid(
                "beta.exponent",
                format!("must be positive, got {}", self.exponent),
            ));
        }
        Ok(())
    }

    pub fn eval(&self, t: f64) -> f64 {
        let log_t = t.ln().max(0.0);
        self.scale * log_t.powf(self.exponent)
    }

    /// `min { t in N : beta(t) >= level }`, or `+inf` when that time is not
    /// representable as an `f64`.
    pub fn first_time_at_least(&self, level: f64) -> f64 {
        if level <= 0.0 {
            return 1.0;
        }
        let log_t = (level / self.scale).powf(1.0 / self.exponent);
        let t = log_t.exp();
        if !t.is_finite() {
            return f64::INFINITY;
        }
        let mut candidate = t.ceil().max(1.0);
        // correct for rounding in exp/powf
        while candidate > 1.0 && self.eval(candidate - 1.0) >= level {
            candidate -= 1.0;
        }
        while self.eval(candidate) < level {
            candidate += 1.0;
        }
        candidate
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BiasSchedule {
    Fixed {
        c_alpha: f64,
    },
    AdaptiveGaussian {
        sigma: f64,
        beta: BetaFn,
        /// Use `256 sigma^2 (N+2) / Delta_hat`; when false, `256 sigma^2 / Delta_hat`.
        include_n_plus_2: bool,
    },
    AdaptiveBernoulli {
        epsilon: f64,
        beta: BetaFn,
    },
    AdaptiveExponential {
        kappa: f64,
        rho: f64,
        epsilon: f64,
        beta: BetaFn,
        /// Use the confidence radius exactly as printed,
        /// `(kappa (N+2) L + sqrt(kappa^2 (N+2)^2 L^2) + 2 rho^2 (N+2) L) / N_i`;
        /// otherwise `(kappa (N+2) L + sqrt(kappa^2 (N+2)^2 L^2 + 2 rho^2 (N+2) N_i L)) / N_i`.
        literal_radius: bool,
    },
}

/// Per-arm confidence bounds and the derived gap estimate.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceSnapshot {
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
    pub u_max: f64,
    pub delta_hat: f64,
}

impl ConfidenceSnapshot {
    /// `u_max = max_i U_i` and `delta_hat = max_i max(0, L_i - max_{j != i} U_j)`.
    /// A single arm has no gap to estimate and gets `delta_hat = 0`.
    pub fn from_bounds(upper: Vec<f64>, lower: Vec<f64>) -> Self {
        assert_eq!(upper.len(), lower.len());
        let (mut first, mut second) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut first_arm = usize::MAX;
        for (i, &u) in upper.iter().enumerate() {
            if u > first {
                second = first;
                first = u;
                first_arm = i;
            } else if u > second {
                second = u;
            }
        }
        let mut delta_hat = 0.0f64;
        if upper.len() > 1 {
            for (i, &l) in lower.iter().enumerate() {
                let others = if i == first_arm { second } else { first };
                delta_hat = delta_hat.max(l - others);
            }
        }
        Self {
            upper,
            lower,
            u_max: first,
            delta_hat,
        }
    }
}

/// Result of one adaptive schedule evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct AdaptiveAlpha {
    pub alpha: f64,
    /// `C_hat(t)`; `+inf` when the gap estimate is zero or the shortcut fires.
    pub c_alpha_hat: f64,
    /// The `C_hat(t) > beta(t)` shortcut certified the result without `K*`.
    pub shortcut: bool,
    pub snapshot: ConfidenceSnapshot,
}

impl BiasSchedule {
    pub fn fixed(c_alpha: f64) -> Self {
        BiasSchedule::Fixed { c_alpha }
    }

    pub fn validate(&self) -> Result<()> {
        let check_eps = |eps: f64| {
            if eps > 0.0 && eps < 0.5 {
                Ok(())
            } else {
                Err(Error::invalid("epsilon", format!("must lie in (0, 1/2), got {eps}")))
            }
        };
        match *self {
            BiasSchedule::Fixed { c_alpha } => {
                if !(c_alpha >= 0.0 && c_alpha.is_finite()) {
                    return Err(Error::invalid(
                        "c_alpha",
                        format!("must be finite and nonnegative, got {c_alpha}"),
                    ));
                }
            }
            BiasSchedule::AdaptiveGaussian { sigma, beta, .. } => {
                if !(sigma > 0.0 && sigma.is_finite()) {
                    return Err(Error::invalid("sigma", format!("must be positive, got {sigma}")));
                }
                beta.validate()?;
            }
            BiasSchedule::AdaptiveBernoulli { epsilon, beta } => {
                check_eps(epsilon)?;
                beta.validate()?;
            }
            BiasSchedule::AdaptiveExponential {
                kappa,
                rho,
                epsilon,
                beta,
                ..
            } => {
                if !(kappa >= 0.0 && rho >= 0.0 && kappa.is_finite() && rho.is_finite()) {
                    return Err(Error::invalid("kappa/rho", "must be finite and nonnegative"));
                }
                check_eps(epsilon)?;
                beta.validate()?;
            }
        }
        Ok(())
    }

    /// `alpha(t)` for the current statistics. Every arm must have been pulled.
    pub fn alpha(&self, spec: &FamilySpec, stats: &[ArmStats], t: u64) -> Result<f64> {
        Ok(match *self {
            BiasSchedule::Fixed { c_alpha } => c_alpha * (t as f64).ln(),
            BiasSchedule::AdaptiveGaussian {
                sigma,
                beta,
                include_n_plus_2,
            } => adaptive_alpha_gaussian(stats, t, sigma, beta, include_n_plus_2)?.alpha,
            BiasSchedule::AdaptiveBernoulli { epsilon, beta } => {
                adaptive_alpha_bernoulli(spec, stats, t, epsilon, beta)?.alpha
            }
            BiasSchedule::AdaptiveExponential {
                kappa,
                rho,
                epsilon,
                beta,
                literal_radius,
            } => adaptive_alpha_exponential(spec, stats, t, kappa, rho, epsilon, beta, literal_radius)?.alpha,
        })
    }
}

fn check_stats(stats: &[ArmStats], t: u64) -> Result<()> {
    if stats.is_empty() {
        return Err(Error::invalid("stats", "no arms"));
    }
    if t == 0 {
        return Err(Error::invalid("t", "time starts at 1"));
    }
    if let Some(i) = stats.iter().position(|s| s.pulls == 0) {
        return Err(Error::invalid("stats", format!("arm {i} has not been pulled")));
    }
    Ok(())
}

fn snapshot_with_radius(stats: &[ArmStats], radius: impl Fn(&ArmStats) -> f64, upper_cap: f64) -> ConfidenceSnapshot {
    let mut upper = Vec::with_capacity(stats.len());
    let mut lower = Vec::with_capacity(stats.len());
    for s in stats {
        let p = s.empirical_mean();
        let r = radius(s);
        upper.push((p + r).min(upper_cap));
        lower.push(p - r);
    }
    ConfidenceSnapshot::from_bounds(upper, lower)
}

/// Adaptive schedule for (sub-)Gaussian rewards:
/// radii `sqrt(2 sigma^2 (N+2) log t / N_i)`, `C_hat = 256 sigma^2 [(N+2)] / Delta_hat`.
pub fn adaptive_alpha_gaussian(
    stats: &[ArmStats],
    t: u64,
    sigma: f64,
    beta: BetaFn,
    include_n_plus_2: bool,
) -> Result<AdaptiveAlpha> {
    check_stats(stats, t)?;
    let n_arms = stats.len() as f64;
    let log_t = (t as f64).ln();
    let width = 2.0 * sigma * sigma * (n_arms + 2.0) * log_t;
    let snapshot = snapshot_with_radius(stats, |s| (width / s.pulls as f64).sqrt(), f64::INFINITY);

    let numerator = if include_n_plus_2 {
        256.0 * sigma * sigma * (n_arms + 2.0)
    } else {
        256.0 * sigma * sigma
    };
    let c_alpha_hat = if snapshot.delta_hat > 0.0 {
        numerator / snapshot.delta_hat
    } else {
        f64::INFINITY
    };
    let b = beta.eval(t as f64);
    Ok(AdaptiveAlpha {
        alpha: c_alpha_hat.min(b) * log_t,
        c_alpha_hat,
        shortcut: false,
        snapshot,
    })
}

/// Shared tail of the Bernoulli and exponential schemes:
/// `C_hat = scale / K*(U_max - eps Delta_hat / 2, theta_lower)`, skipping the
/// `K*` search when `xi(scale / beta(t); theta_lower) < eta(U_max - eps Delta_hat / 2)`
/// already certifies `C_hat > beta(t)`.
fn alpha_from_k_star(
    spec: &FamilySpec,
    snapshot: ConfidenceSnapshot,
    t: u64,
    epsilon: f64,
    beta: BetaFn,
    scale: impl Fn(f64) -> f64,
) -> Result<AdaptiveAlpha> {
    let log_t = (t as f64).ln();
    let b = beta.eval(t as f64);
    let fallback = |snapshot, shortcut| AdaptiveAlpha {
        alpha: b * log_t,
        c_alpha_hat: f64::INFINITY,
        shortcut,
        snapshot,
    };
    if log_t == 0.0 {
        return Ok(AdaptiveAlpha {
            alpha: 0.0,
            c_alpha_hat: f64::INFINITY,
            shortcut: false,
            snapshot,
        });
    }
    if snapshot.delta_hat <= 0.0 {
        return Ok(fallback(snapshot, true));
    }

    let gap = epsilon * snapshot.delta_hat;
    let c_scale = scale(gap);
    let anchor = spec.clip(snapshot.u_max - gap / 2.0);
    let target = spec.mean_to_natural(anchor)?;
    let theta_lower = spec.theta_lower;

    if spec.xi(c_scale / b, theta_lower)? < target {
        return Ok(fallback(snapshot, true));
    }
    let k = match spec.k_star(anchor, theta_lower, DEFAULT_TOL, DEFAULT_MAX_ITER) {
        Ok(k) => k,
        Err(Error::Degenerate { .. }) | Err(Error::NonFinite { .. }) => return Ok(fallback(snapshot, false)),
        // the lower bracket end keeps C_hat on the conservative side
        Err(Error::IterationLimit { lo, .. }) => lo,
        Err(e) => return Err(e),
    };
    let c_alpha_hat = c_scale / k;
    Ok(AdaptiveAlpha {
        alpha: c_alpha_hat.min(b) * log_t,
        c_alpha_hat,
        shortcut: false,
        snapshot,
    })
}

/// Adaptive schedule for Bernoulli rewards: Hoeffding radii
/// `sqrt((N+2) log t / N_i)` clamped to `[0, 1]`, and
/// `C_hat = (N+2) / (2 (eps Delta_hat)^2 K*(U_max - eps Delta_hat/2, theta_lower))`.
pub fn adaptive_alpha_bernoulli(
    spec: &FamilySpec,
    stats: &[ArmStats],
    t: u64,
    epsilon: f64,
    beta: BetaFn,
) -> Result<AdaptiveAlpha> {
    check_stats(stats, t)?;
    let n_arms = stats.len() as f64;
    let log_t = (t as f64).ln();
    let width = (n_arms + 2.0) * log_t;
    let mut snapshot = snapshot_with_radius(stats, |s| (width / s.pulls as f64).sqrt(), 1.0);
    clamp_lower(&mut snapshot);
    alpha_from_k_star(spec, snapshot, t, epsilon, beta, |gap| {
        (n_arms + 2.0) / (2.0 * gap * gap)
    })
}

/// Confidence radius of the exponential scheme.
pub fn exponential_radius(kappa: f64, rho: f64, n_arms: usize, pulls: u64, log_t: f64, literal: bool) -> f64 {
    let m = n_arms as f64 + 2.0;
    let n = pulls as f64;
    let linear = kappa * m * log_t;
    if literal {
        (linear + (kappa * kappa * m * m * log_t * log_t).sqrt() + 2.0 * rho * rho * m * log_t) / n
    } else {
        (linear + (kappa * kappa * m * m * log_t * log_t + 2.0 * rho * rho * m * n * log_t).sqrt()) / n
    }
}

/// Adaptive schedule for exponential rewards: sub-exponential radii and
/// `C_hat = 16 (kappa eps Delta_hat + 2 rho^2) / ((eps Delta_hat)^2 K*(U_max - eps Delta_hat/2, theta_lower))`.
/// With `theta_lower = 0` the `K*` search is degenerate and `alpha = beta(t) log t`.
#[allow(clippy::too_many_arguments)]
pub fn adaptive_alpha_exponential(
    spec: &FamilySpec,
    stats: &[ArmStats],
    t: u64,
    kappa: f64,
    rho: f64,
    epsilon: f64,
    beta: BetaFn,
    literal_radius: bool,
) -> Result<AdaptiveAlpha> {
    check_stats(stats, t)?;
    let n_arms = stats.len();
    let log_t = (t as f64).ln();
    let mut snapshot = snapshot_with_radius(
        stats,
        |s| exponential_radius(kappa, rho, n_arms, s.pulls, log_t, literal_radius),
        f64::INFINITY,
    );
    clamp_lower(&mut snapshot);
    alpha_from_k_star(spec, snapshot, t, epsilon, beta, |gap| {
        16.0 * (kappa * gap + 2.0 * rho * rho) / (gap * gap)
    })
}

fn clamp_lower(snapshot: &mut ConfidenceSnapshot) {
    for l in &mut snapshot.lower {
        *l = l.max(0.0);
    }
    // lower bounds only ever rise here, so recompute the gap estimate
    let rebuilt =
        ConfidenceSnapshot::from_bounds(std::mem::take(&mut snapshot.upper), std::mem::take(&mut snapshot.lower));
    *snapshot = rebuilt;
}
