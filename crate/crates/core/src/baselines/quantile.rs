//! Posterior quantiles for Bayes-UCB.

use statrs::function::beta::beta_reg;
use statrs::function::erf::{erfc, erfc_inv};
use statrs::function::gamma::gamma_lr;

use std::f64::consts::{PI, SQRT_2};

/// Quantile levels are kept inside `[LEVEL_EPS, 1 - LEVEL_EPS]`.
pub const LEVEL_EPS: f64 = 1e-12;

const BISECT_TOL: f64 = 1e-8;
const BISECT_ITERS: usize = 200;

pub fn clamp_level(q: f64) -> f64 {
    if q.is_nan() {
        return 0.5;
    }
    q.clamp(LEVEL_EPS, 1.0 - LEVEL_EPS)
}

/// `1 - 1 / (t (log T)^c)`, clamped. With `c = 0` the horizon drops out.
pub fn bucb_level(t: u64, horizon: u64, c: f64) -> f64 {
    let scale = if c == 0.0 { 1.0 } else { (horizon as f64).ln().powf(c) };
    clamp_level(1.0 - 1.0 / (t as f64 * scale))
}

fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// Standard normal quantile: inverse complementary error function followed by
/// one Newton step on the CDF.
pub fn normal_quantile(q: f64) -> f64 {
    let q = clamp_level(q);
    let x = -SQRT_2 * erfc_inv(2.0 * q);
    let density = (-0.5 * x * x).exp() / (2.0 * PI).sqrt();
    if density > 0.0 {
        x - (std_normal_cdf(x) - q) / density
    } else {
        x
    }
}

fn bisect(mut lo: f64, mut hi: f64, q: f64, cdf: impl Fn(f64) -> f64) -> f64 {
    for _ in 0..BISECT_ITERS {
        if hi - lo <= BISECT_TOL * hi.abs().max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if cdf(mid) < q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Quantile of `Beta(a, b)` by bisection on the regularised incomplete beta.
pub fn beta_quantile(a: f64, b: f64, q: f64) -> f64 {
    let q = clamp_level(q);
    bisect(0.0, 1.0, q, |x| beta_reg(a, b, x))
}

/// Quantile of `Gamma(shape, rate)` by bisection on the regularised lower
/// incomplete gamma.
pub fn gamma_quantile(shape: f64, rate: f64, q: f64) -> f64 {
    let q = clamp_level(q);
    let cdf = |x: f64| gamma_lr(shape, rate * x);
    let mut hi = (shape + 1.0) / rate;
    while cdf(hi) < q {
        hi *= 2.0;
    }
    bisect(0.0, hi, q, cdf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn normal_quantile_known_values() {
        assert_abs_diff_eq!(normal_quantile(0.5), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(normal_quantile(0.975), 1.959963984540054, epsilon = 1e-9);
        assert_abs_diff_eq!(normal_quantile(0.001), -3.090232306167813, epsilon = 1e-9);
        assert_abs_diff_eq!(normal_quantile(1.0 - 1e-6), 4.753424308822899, epsilon = 1e-8);
    }

    #[test]
    fn uniform_beta_quantile_is_identity() {
        for &q in &[0.01, 0.25, 0.5, 0.9, 0.999] {
            assert_abs_diff_eq!(beta_quantile(1.0, 1.0, q), q, epsilon = 1e-8);
        }
    }

    #[test]
    fn closed_form_quantiles() {
        // Beta(a, 1): cdf x^a; Gamma(1, b): cdf 1 - exp(-b x)
        assert_abs_diff_eq!(beta_quantile(3.0, 1.0, 0.3), 0.3f64.powf(1.0 / 3.0), epsilon = 1e-8);
        assert_abs_diff_eq!(gamma_quantile(1.0, 2.0, 0.8), -(0.2f64).ln() / 2.0, epsilon = 1e-8);
    }

    #[test]
    fn level_schedule() {
        assert_abs_diff_eq!(bucb_level(10, 1000, 0.0), 0.9);
        assert_eq!(bucb_level(1, 1000, 0.0), LEVEL_EPS);
        // (log T)^c < 1 would push the level below 0; clamped
        assert_eq!(bucb_level(1, 2, 5.0), LEVEL_EPS);
        assert_abs_diff_eq!(
            bucb_level(4, 100, 1.0),
            1.0 - 1.0 / (4.0 * 100f64.ln()),
            epsilon = 1e-15
        );
    }

    proptest! {
        #[test]
        fn beta_quantile_monotone(a in 0.5f64..50.0, b in 0.5f64..50.0, q1 in 0.001f64..0.999, q2 in 0.001f64..0.999) {
            let (lo, hi) = if q1 <= q2 { (q1, q2) } else { (q2, q1) };
            prop_assert!(beta_quantile(a, b, lo) <= beta_quantile(a, b, hi) + 1e-8);
        }

        #[test]
        fn gamma_quantile_inverts_cdf(shape in 1.0f64..200.0, rate in 0.1f64..500.0, q in 0.01f64..0.99) {
            let x = gamma_quantile(shape, rate, q);
            prop_assert!((gamma_lr(shape, rate * x) - q).abs() < 1e-6);
        }
    }
}
