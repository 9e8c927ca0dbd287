//! Comparator policies: UCB, UCB-Tuned, MOSS, KL-UCB, Thompson sampling,
//! Bayes-UCB, GP-UCB and GP-UCB-Tuned.

pub mod indices;
pub mod posterior;
pub mod quantile;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub use indices::{klucb_budget, klucb_index, klucb_solve, moss_index, ucb_index, ucbt_index};
pub use posterior::{PosteriorParams, PosteriorState};
pub use quantile::{beta_quantile, bucb_level, gamma_quantile, normal_quantile};

/// Hyperparameters shared by the baselines.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BaselineConfig {
    pub klucb_c: f64,
    pub bucb_c: f64,
    pub gpucb_delta: f64,
    pub gpucbt_c: f64,
    pub max_iter: usize,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        Self {
            klucb_c: 0.0,
            bucb_c: 0.0,
            gpucb_delta: 1e-5,
            gpucbt_c: 0.9,
            max_iter: 100,
        }
    }
}

/// `beta_t = 2 log(N t^2 pi^2 / (6 delta))`.
pub fn gpucb_beta(n_arms: usize, t: u64, delta: f64) -> f64 {
    let t = t as f64;
    2.0 * (n_arms as f64 * t * t * PI * PI / (6.0 * delta)).ln()
}

/// `beta_t = c log t`.
pub fn gpucbt_beta(t: u64, c: f64) -> f64 {
    c * (t as f64).ln()
}

/// `mu + sqrt(beta_t) sigma` from a Gaussian posterior.
pub fn gpucb_index(posterior: &PosteriorState, beta_t: f64) -> Option<f64> {
    let (mean, sd) = posterior.normal_moments()?;
    Some(mean + beta_t.max(0.0).sqrt() * sd)
}

/// Bayes-UCB index: posterior quantile at `1 - 1 / (t (log T)^c)`.
pub fn bucb_index(posterior: &PosteriorState, t: u64, horizon: u64, c: f64) -> f64 {
    posterior.mean_quantile(bucb_level(t, horizon, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::FamilySpec;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gpucb_beta_example() {
        let b = gpucb_beta(10, 1, 1e-5);
        assert_abs_diff_eq!(b, 2.0 * (10.0 * PI * PI / 6e-5).ln(), epsilon = 1e-12);
        // 2 ln(1.644934e6) = 28.6264
        assert_abs_diff_eq!(b, 28.6264, epsilon = 1e-4);
        assert_abs_diff_eq!(gpucbt_beta(1, 0.9), 0.0);
    }

    #[test]
    fn gpucb_needs_gaussian_posterior() {
        let g = PosteriorState::prior(&FamilySpec::gaussian(1.0).unwrap());
        assert_abs_diff_eq!(gpucb_index(&g, 4.0).unwrap(), 2.0);
        assert!(gpucb_index(&PosteriorState::prior(&FamilySpec::bernoulli()), 4.0).is_none());
    }

    #[test]
    fn bucb_on_uniform_prior() {
        let p = PosteriorState::prior(&FamilySpec::bernoulli());
        assert_abs_diff_eq!(bucb_index(&p, 4, 100, 0.0), 0.75, epsilon = 1e-8);
    }

    #[test]
    fn defaults() {
        let c = BaselineConfig::default();
        assert_eq!((c.klucb_c, c.bucb_c, c.gpucb_delta, c.gpucbt_c), (0.0, 0.0, 1e-5, 0.9));
    }
}
