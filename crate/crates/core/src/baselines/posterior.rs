//! Conjugate posteriors for Thompson sampling, Bayes-UCB and GP-UCB.
//!
//! Priors: `Beta(1, 1)` for Bernoulli arms, `N(0, 1)` for Gaussian arms and
//! `Gamma(1, 1)` on the rate of exponential arms. A posterior only keeps the
//! pull count and reward sum, so the update order never matters.

use rand::Rng;
use rand_distr::{Beta, Distribution, Gamma, Normal};

use crate::family::{FamilyKind, FamilySpec};

use super::quantile::{beta_quantile, gamma_quantile, normal_quantile};

/// Posterior parameters in the family's natural conjugate form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PosteriorParams {
    Beta {
        a: f64,
        b: f64,
    },
    /// Posterior over the mean with the given precision.
    Normal {
        mean: f64,
        precision: f64,
    },
    /// Posterior over the rate `1 / theta`.
    Gamma {
        shape: f64,
        rate: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PosteriorState {
    pub kind: FamilyKind,
    pub pulls: u64,
    pub reward_sum: f64,
}

impl PosteriorState {
    pub fn prior(spec: &FamilySpec) -> Self {
        Self {
            kind: spec.kind,
            pulls: 0,
            reward_sum: 0.0,
        }
    }

    pub fn update(&mut self, reward: f64) {
        self.pulls += 1;
        self.reward_sum += reward;
    }

    pub fn params(&self) -> PosteriorParams {
        let n = self.pulls as f64;
        let s = self.reward_sum;
        match self.kind {
            FamilyKind::Bernoulli => PosteriorParams::Beta {
                a: 1.0 + s,
                b: 1.0 + n - s,
            },
            FamilyKind::Gaussian { sigma } => {
                let noise_precision = 1.0 / (sigma * sigma);
                let precision = 1.0 + n * noise_precision;
                PosteriorParams::Normal {
                    mean: s * noise_precision / precision,
                    precision,
                }
            }
            FamilyKind::Exponential => PosteriorParams::Gamma {
                shape: 1.0 + n,
                rate: 1.0 + s,
            },
        }
    }

    /// Posterior mean and standard deviation of the arm mean (Gaussian arms).
    pub fn normal_moments(&self) -> Option<(f64, f64)> {
        match self.params() {
            PosteriorParams::Normal { mean, precision } => Some((mean, precision.sqrt().recip())),
            _ => None,
        }
    }

    /// One posterior draw of the arm mean.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.params() {
            PosteriorParams::Beta { a, b } => Beta::new(a, b).expect("positive beta parameters").sample(rng),
            PosteriorParams::Normal { mean, precision } => Normal::new(mean, precision.sqrt().recip())
                .expect("finite normal parameters")
                .sample(rng),
            PosteriorParams::Gamma { shape, rate } => {
                let lambda: f64 = Gamma::new(shape, 1.0 / rate)
                    .expect("positive gamma parameters")
                    .sample(rng);
                1.0 / lambda
            }
        }
    }

    /// Quantile of the posterior of the arm mean at `level`.
    pub fn mean_quantile(&self, level: f64) -> f64 {
        match self.params() {
            PosteriorParams::Beta { a, b } => beta_quantile(a, b, level),
            PosteriorParams::Normal { mean, precision } => mean + normal_quantile(level) / precision.sqrt(),
            // theta = 1 / lambda is decreasing in lambda
            PosteriorParams::Gamma { shape, rate } => 1.0 / gamma_quantile(shape, rate, 1.0 - level),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn beta_conjugacy() {
        let mut p = PosteriorState::prior(&FamilySpec::bernoulli());
        for x in [1.0, 0.0, 1.0, 1.0, 0.0] {
            p.update(x);
        }
        assert_eq!(p.params(), PosteriorParams::Beta { a: 4.0, b: 3.0 });
    }

    #[test]
    fn normal_posterior_unit_variance() {
        let mut p = PosteriorState::prior(&FamilySpec::gaussian(1.0).unwrap());
        for x in [0.5, 1.5, 1.0] {
            p.update(x);
        }
        let (m, sd) = p.normal_moments().unwrap();
        assert_abs_diff_eq!(m, 3.0 / 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sd, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn gamma_posterior_on_rate() {
        let mut p = PosteriorState::prior(&FamilySpec::exponential());
        p.update(0.25);
        p.update(0.75);
        assert_eq!(p.params(), PosteriorParams::Gamma { shape: 3.0, rate: 2.0 });
    }

    #[test]
    fn uniform_prior_quantile_is_identity() {
        let p = PosteriorState::prior(&FamilySpec::bernoulli());
        for &q in &[0.1, 0.5, 0.95] {
            assert_abs_diff_eq!(p.mean_quantile(q), q, epsilon = 1e-8);
        }
    }

    #[test]
    fn samples_reproducible_under_fixed_stream() {
        for spec in [
            FamilySpec::bernoulli(),
            FamilySpec::gaussian(1.0).unwrap(),
            FamilySpec::exponential(),
        ] {
            let mut p = PosteriorState::prior(&spec);
            p.update(0.6);
            let draw = |seed| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..5).map(|_| p.sample(&mut rng).to_bits()).collect::<Vec<_>>()
            };
            assert_eq!(draw(9), draw(9));
            assert_ne!(draw(9), draw(10));
        }
    }

    #[test]
    fn exponential_quantile_tracks_mean() {
        let mut p = PosteriorState::prior(&FamilySpec::exponential());
        for _ in 0..2000 {
            p.update(0.3);
        }
        assert!((p.mean_quantile(0.5) - 0.3).abs() < 0.01);
        assert!(p.mean_quantile(0.9) > p.mean_quantile(0.5));
    }

    proptest! {
        #[test]
        fn update_order_is_irrelevant(xs in prop::collection::vec(0.0f64..3.0, 0..30)) {
            let spec = FamilySpec::exponential();
            let mut a = PosteriorState::prior(&spec);
            for &x in &xs {
                a.update(x);
            }
            let mut b = PosteriorState::prior(&spec);
            let (head, tail) = xs.split_at(xs.len() / 2);
            for &x in head.iter().chain(tail) {
                b.update(x);
            }
            prop_assert_eq!(a, b);
        }

        #[test]
        fn quantile_nondecreasing_in_level(s in 0u32..20, extra in 0u32..20, l1 in 0.01f64..0.99, l2 in 0.01f64..0.99) {
            let mut p = PosteriorState::prior(&FamilySpec::bernoulli());
            for _ in 0..s { p.update(1.0); }
            for _ in 0..extra { p.update(0.0); }
            let (lo, hi) = if l1 <= l2 { (l1, l2) } else { (l2, l1) };
            prop_assert!(p.mean_quantile(lo) <= p.mean_quantile(hi) + 1e-8);
        }
    }
}
