//! Frequentist confidence-bound indices.

use crate::error::{Error, Result};
use crate::family::{FamilyKind, FamilySpec};
use crate::rbmle::ArmStats;

/// `p + sqrt(2 log t / N)`.
pub fn ucb_index(stats: &ArmStats, t: u64) -> f64 {
    let n = stats.pulls as f64;
    stats.empirical_mean() + (2.0 * (t as f64).ln() / n).sqrt()
}

/// `p + sqrt(min(1/4, V) log t / N)` with the tuned variance bound
/// `V = var + sqrt(2 log t / N)`.
pub fn ucbt_index(stats: &ArmStats, t: u64) -> f64 {
    let n = stats.pulls as f64;
    let log_t = (t as f64).ln();
    let v = stats.empirical_variance() + (2.0 * log_t / n).sqrt();
    stats.empirical_mean() + (v.min(0.25) * log_t / n).sqrt()
}

/// `p + sqrt(max(log(T / (N_i N)), 0) / N_i)`.
pub fn moss_index(stats: &ArmStats, horizon: u64, n_arms: usize) -> f64 {
    let n = stats.pulls as f64;
    let bonus = (horizon as f64 / (n * n_arms as f64)).ln().max(0.0);
    stats.empirical_mean() + (bonus / n).sqrt()
}

/// Exploration budget `(log t + c log log t) / N`. The `log log t` term is
/// dropped while it is negative or undefined (`t <= e`).
pub fn klucb_budget(stats: &ArmStats, t: u64, c: f64) -> f64 {
    let log_t = (t as f64).ln();
    let extra = if c != 0.0 && log_t > 1.0 { c * log_t.ln() } else { 0.0 };
    (log_t + extra).max(0.0) / stats.pulls as f64
}

pub const KLUCB_TOL: f64 = 1e-9;
const BERNOULLI_CAP: f64 = 1.0 - 1e-12;
const EXPONENTIAL_SPAN: f64 = 1e6;

/// `max { q >= p : D(p, q) <= B }` by bisection. Gaussian arms use the closed
/// form `p + sqrt(2 sigma^2 B)`. The returned value is always feasible.
pub fn klucb_index(spec: &FamilySpec, stats: &ArmStats, t: u64, c: f64, max_iter: usize) -> Result<f64> {
    let p = stats.empirical_mean();
    let budget = klucb_budget(stats, t, c);
    klucb_solve(spec, p, budget, max_iter)
}

/// Core of [`klucb_index`] on a raw mean and budget.
pub fn klucb_solve(spec: &FamilySpec, p: f64, budget: f64, max_iter: usize) -> Result<f64> {
    let (lo, hi) = match spec.kind {
        FamilyKind::Gaussian { sigma } => return Ok(p + (2.0 * sigma * sigma * budget).sqrt()),
        FamilyKind::Bernoulli => (p, BERNOULLI_CAP.max(p)),
        FamilyKind::Exponential => {
            if p <= 0.0 {
                return Ok(0.0);
            }
            (p, p * EXPONENTIAL_SPAN)
        }
    };
    if budget <= 0.0 {
        return Ok(p);
    }
    let within = |q: f64| -> Result<bool> { Ok(spec.kl_div(p, q)? <= budget) };
    if within(hi)? {
        return Ok(hi);
    }
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..max_iter {
        if hi - lo <= KLUCB_TOL {
            return Ok(lo);
        }
        let mid = 0.5 * (lo + hi);
        if within(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if hi - lo <= KLUCB_TOL {
        Ok(lo)
    } else {
        Err(Error::IterationLimit {
            limit: max_iter,
            lo,
            hi,
        })
    }
}
