//! Numerical property suites: closed-form equivalence, index monotonicity
//! and threshold lemmas, `K*` against independent oracles, and a Monte Carlo
//! check of the sub-Gaussian confidence radius.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::family::{FamilyKind, FamilySpec, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::rbmle::{bernoulli_index, exponential_index, gaussian_index_scaled, generic_index, ArmStats};
use crate::Error;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{:<12} {:<44} {status}  {}", self.suite, c.name, c.detail)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Lemmas,
    Equivalence,
    Kstar,
    Concentration,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Lemmas, Suite::Equivalence, Suite::Kstar, Suite::Concentration];

    pub fn run(&self, seed: u64) -> SuiteReport {
        match self {
            Suite::Lemmas => lemma_suite(),
            Suite::Equivalence => equivalence_suite(),
            Suite::Kstar => kstar_suite(seed),
            Suite::Concentration => concentration_suite(seed),
        }
    }
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

const EQUIV_ALPHAS: [f64; 4] = [0.0, 0.1, 1.0, 10.0];

fn interior_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (1..=points)
        .map(|i| lo + (hi - lo) * i as f64 / (points + 1) as f64)
        .collect()
}

/// Largest `|generic - closed form|` over `N = 1..=50`, the four bias levels
/// and an interior mean grid.
pub fn max_equivalence_gap(spec: &FamilySpec) -> f64 {
    let means = match spec.kind {
        FamilyKind::Bernoulli => interior_grid(0.0, 1.0, 39),
        FamilyKind::Gaussian { .. } => interior_grid(-3.0, 3.0, 39),
        FamilyKind::Exponential => interior_grid(0.0, 4.0, 39),
    };
    let mut worst = 0.0f64;
    for &p in &means {
        for n in 1..=50u64 {
            let stats = ArmStats::with_mean(p, n);
            for &alpha in &EQUIV_ALPHAS {
                let generic = generic_index(spec, p, n, alpha).unwrap_or(f64::NAN);
                let closed = match spec.kind {
                    FamilyKind::Bernoulli => bernoulli_index(&stats, alpha),
                    FamilyKind::Gaussian { sigma } => gaussian_index_scaled(&stats, alpha, sigma),
                    FamilyKind::Exponential => exponential_index(&stats, alpha),
                };
                let gap = (generic - closed).abs();
                worst = if gap.is_nan() { f64::INFINITY } else { worst.max(gap) };
            }
        }
    }
    worst
}

pub fn equivalence_suite() -> SuiteReport {
    let specs = [
        FamilySpec::bernoulli(),
        FamilySpec::gaussian(1.0).unwrap(),
        FamilySpec::gaussian(0.5).unwrap(),
        FamilySpec::exponential(),
    ];
    let checks = specs
        .iter()
        .map(|spec| {
            let gap = max_equivalence_gap(spec);
            let label = match spec.sigma() {
                Some(s) => format!("{} (sigma {s})", spec.name()),
                None => spec.name().to_string(),
            };
            check(label, gap <= 1e-9, format!("max abs deviation {gap:.3e}"))
        })
        .collect();
    SuiteReport {
        suite: "equivalence",
        checks,
    }
}

fn lemma_specs() -> Vec<(FamilySpec, Vec<f64>)> {
    vec![
        (FamilySpec::bernoulli(), interior_grid(0.0, 1.0, 9)),
        (FamilySpec::gaussian(1.0).unwrap(), interior_grid(-2.0, 2.0, 9)),
        (FamilySpec::exponential(), interior_grid(0.0, 3.0, 9)),
    ]
}

/// Whether `nu + alpha / n` stays inside the mean domain. The monotonicity
/// and threshold statements concern this regime; a clipped Bernoulli index is
/// `n H(nu)`, which grows with `n`.
fn unclipped(spec: &FamilySpec, nu: f64, n: f64, alpha: f64) -> bool {
    match spec.kind {
        FamilyKind::Bernoulli => nu + alpha / n < 1.0,
        _ => true,
    }
}

fn index(spec: &FamilySpec, nu: f64, n: u64, alpha: f64) -> f64 {
    generic_index(spec, nu, n, alpha).unwrap_or(f64::NAN)
}

pub fn lemma_suite() -> SuiteReport {
    let mut checks = Vec::new();
    let alphas = [0.1, 1.0, 10.0];

    for (spec, nus) in lemma_specs() {
        // decreasing in n
        let (mut cases, mut bad) = (0u64, 0u64);
        for &nu in &nus {
            for &alpha in &alphas {
                let mut prev: Option<f64> = None;
                for n in 1..=1000u64 {
                    if !unclipped(&spec, nu, n as f64, alpha) {
                        continue;
                    }
                    let v = index(&spec, nu, n, alpha);
                    if let Some(p) = prev {
                        cases += 1;
                        if !(v < p) {
                            bad += 1;
                        }
                    }
                    prev = Some(v);
                }
            }
        }
        checks.push(check(
            format!("index decreasing in n [{}]", spec.name()),
            bad == 0 && cases > 0,
            format!("{bad} violations / {cases} steps"),
        ));

        // increasing in nu
        let grid = match spec.kind {
            FamilyKind::Bernoulli => interior_grid(0.0, 1.0, 100),
            FamilyKind::Gaussian { .. } => interior_grid(-3.0, 3.0, 100),
            FamilyKind::Exponential => interior_grid(0.0, 5.0, 100),
        };
        let (mut cases, mut bad) = (0u64, 0u64);
        for &alpha in &alphas {
            for n in [1u64, 2, 5, 10, 50, 200, 1000] {
                let values: Vec<f64> = grid
                    .iter()
                    .filter(|&&nu| unclipped(&spec, nu, n as f64, alpha))
                    .map(|&nu| index(&spec, nu, n, alpha))
                    .collect();
                for w in values.windows(2) {
                    cases += 1;
                    if !(w[1] > w[0]) {
                        bad += 1;
                    }
                }
            }
        }
        checks.push(check(
            format!("index increasing in mean [{}]", spec.name()),
            bad == 0 && cases > 0,
            format!("{bad} violations / {cases} steps"),
        ));

        // beyond K*(mu1, mu2) alpha pulls the lower mean loses to the higher one
        let (mut cases, mut bad, mut skipped) = (0u64, 0u64, 0u64);
        let alpha = 1.0;
        for (i, &mu1) in nus.iter().enumerate() {
            for &mu2 in &nus[..i] {
                let k = match spec.k_star(mu1, mu2, DEFAULT_TOL, DEFAULT_MAX_ITER) {
                    Ok(k) => k,
                    Err(_) => {
                        skipped += 1;
                        continue;
                    }
                };
                let n2 = (k * alpha).ceil() as u64 + 1;
                let rhs = index(&spec, mu2, n2, alpha);
                for n1 in 1..=100u64 {
                    if !unclipped(&spec, mu1, n1 as f64, alpha) {
                        continue;
                    }
                    cases += 1;
                    if !(index(&spec, mu1, n1, alpha) > rhs) {
                        bad += 1;
                    }
                }
            }
        }
        checks.push(check(
            format!("higher mean wins past K* [{}]", spec.name()),
            bad == 0 && cases > 0,
            format!("{bad} violations / {cases} cases, {skipped} degenerate pairs skipped"),
        ));

        // pulls below and above the thresholds of a common reference mean
        let (mut cases, mut bad, mut skipped) = (0u64, 0u64, 0u64);
        for &alpha in &[1.0, 3.0] {
            for (i0, &mu0) in nus.iter().enumerate() {
                for &mu1 in &nus[..i0] {
                    for &mu2 in &nus[..i0] {
                        let (k1, k2) = match (
                            spec.k_star(mu0, mu1, DEFAULT_TOL, DEFAULT_MAX_ITER),
                            spec.k_star(mu0, mu2, DEFAULT_TOL, DEFAULT_MAX_ITER),
                        ) {
                            (Ok(a), Ok(b)) => (a, b),
                            _ => {
                                skipped += 1;
                                continue;
                            }
                        };
                        // stay clear of the bracket tolerance at K* itself
                        let n1_max = ((k1 - DEFAULT_TOL) * alpha).floor() as u64;
                        let n2_min = (k2 * alpha).floor() as u64 + 1;
                        for n1 in 1..=n1_max.min(200) {
                            if !unclipped(&spec, mu1, n1 as f64, alpha) {
                                continue;
                            }
                            let lhs = index(&spec, mu1, n1, alpha);
                            for n2 in n2_min..n2_min + 20 {
                                cases += 1;
                                if !(lhs > index(&spec, mu2, n2, alpha)) {
                                    bad += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
        checks.push(check(
            format!("threshold ordering via reference [{}]", spec.name()),
            bad == 0 && cases > 0,
            format!("{bad} violations / {cases} cases, {skipped} degenerate pairs skipped"),
        ));
    }
    SuiteReport {
        suite: "lemmas",
        checks,
    }
}

/// Bernoulli `xi(k; nu)` written out from the binary entropy, independent of
/// the library's generic evaluation.
fn bernoulli_xi_oracle(k: f64, nu: f64) -> f64 {
    let g = |q: f64| {
        let a = if q > 0.0 { q * q.ln() } else { 0.0 };
        let b = if q < 1.0 { (1.0 - q) * (1.0 - q).ln() } else { 0.0 };
        a + b
    };
    k * (g((nu + 1.0 / k).min(1.0)) - g(nu))
}

/// First point of the `step` grid starting at `1 / (1 - nu)` where
/// `ln(hi / (1 - hi)) > xi(k; nu)`: a unit scan followed by a fine scan.
pub fn bernoulli_k_star_grid(hi: f64, lo: f64, step: f64) -> f64 {
    let target = (hi / (1.0 - hi)).ln();
    let start = 1.0 / (1.0 - lo);
    let mut k = start;
    while target <= bernoulli_xi_oracle(k + 1.0, lo) {
        k += 1.0;
    }
    let mut j = 0u64;
    loop {
        let kk = k + j as f64 * step;
        if target > bernoulli_xi_oracle(kk, lo) {
            return kk;
        }
        j += 1;
    }
}

pub fn kstar_suite(seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6b5f_7374);
    let mut checks = Vec::new();

    let mut worst = 0.0f64;
    let mut failures = 0;
    for _ in 0..50 {
        let sigma = rng.random_range(0.3..3.0);
        let lo = rng.random_range(-2.0..2.0);
        let hi = lo + rng.random_range(0.01..2.0);
        let spec = FamilySpec::gaussian(sigma).unwrap();
        match spec.k_star_bisection(hi, lo, DEFAULT_TOL, DEFAULT_MAX_ITER) {
            Ok(k) => worst = worst.max((k - 1.0 / (2.0 * (hi - lo))).abs()),
            Err(_) => failures += 1,
        }
    }
    checks.push(check(
        "gaussian bisection vs 1/(2(hi - lo))",
        worst <= 1e-6 && failures == 0,
        format!("50 pairs, max abs error {worst:.3e}, {failures} errors"),
    ));

    let spec = FamilySpec::bernoulli();
    let step = 1e-4;
    let (mut pairs, mut misses, mut worst) = (0, 0, 0.0f64);
    while pairs < 20 {
        let lo: f64 = rng.random_range(0.02..0.6);
        let hi = (lo + rng.random_range(0.05..0.35)).min(0.95);
        let k = match spec.k_star(hi, lo, DEFAULT_TOL, DEFAULT_MAX_ITER) {
            Ok(k) => k,
            Err(Error::Degenerate { .. }) => continue,
            Err(_) => {
                misses += 1;
                pairs += 1;
                continue;
            }
        };
        pairs += 1;
        let grid = bernoulli_k_star_grid(hi, lo, step);
        // the grid value is the first grid point past the crossing
        let inside = k <= grid + DEFAULT_TOL && k > grid - step - DEFAULT_TOL;
        worst = worst.max((k - grid).abs());
        if !inside {
            misses += 1;
        }
    }
    checks.push(check(
        "bernoulli bisection vs 1e-4 grid scan",
        misses == 0,
        format!("20 pairs, {misses} outside the grid cell, max |k - grid| {worst:.3e}"),
    ));
    SuiteReport { suite: "kstar", checks }
}

/// Violation frequency of the radius `sqrt(2 sigma^2 (N+2) log t / n)` for
/// the mean of `n` draws, over `resamples` Monte Carlo repetitions.
#[allow(clippy::too_many_arguments)]
pub fn radius_violation_frequency(
    family: &FamilySpec,
    theta: f64,
    sigma: f64,
    n_arms: usize,
    n: usize,
    t: f64,
    resamples: usize,
    rng: &mut ChaCha8Rng,
) -> f64 {
    let radius = (2.0 * sigma * sigma * (n_arms as f64 + 2.0) * t.ln() / n as f64).sqrt();
    let mut hits = 0usize;
    for _ in 0..resamples {
        let mut sum = 0.0;
        for _ in 0..n {
            sum += match family.kind {
                FamilyKind::Bernoulli => {
                    if rng.random::<f64>() < theta {
                        1.0
                    } else {
                        0.0
                    }
                }
                FamilyKind::Gaussian { sigma } => theta + sigma * rng.sample::<f64, _>(StandardNormal),
                FamilyKind::Exponential => theta * -(1.0 - rng.random::<f64>()).ln(),
            };
        }
        if (sum / n as f64 - theta).abs() > radius {
            hits += 1;
        }
    }
    hits as f64 / resamples as f64
}

pub fn concentration_suite(seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x636f_6e63);
    let n_arms = 2usize;
    let t = 100.0f64;
    let budget = 2.0 / t.powi(n_arms as i32 + 2);
    let cases = [
        (FamilySpec::gaussian(1.0).unwrap(), 0.0, 1.0),
        (FamilySpec::bernoulli(), 0.5, 0.5),
    ];
    let mut checks = Vec::new();
    for (spec, theta, sigma) in cases {
        for n in [10usize, 100] {
            let freq = radius_violation_frequency(&spec, theta, sigma, n_arms, n, t, 100_000, &mut rng);
            checks.push(check(
                format!("{} n={n} t=100", spec.name()),
                freq < 2.0 * budget,
                format!("frequency {freq:.3e} vs budget {budget:.3e}"),
            ));
        }
    }
    SuiteReport {
        suite: "concentration",
        checks,
    }
}
