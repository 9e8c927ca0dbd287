//! One-parameter exponential families written in mean coordinates.
//!
//! Every RBMLE quantity is expressed through three maps of the mean `theta`:
//! the natural parameter `eta = Fdot^{-1}(theta)`, the log-partition at that
//! parameter `F(eta)`, and their Legendre combination
//! `theta * eta - F(eta)`. Boundary means follow an extended-real contract:
//! they evaluate to `+inf`/`-inf` (or to the continuous limit where one
//! exists) instead of failing, so clamped confidence bounds can be fed in
//! directly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ITER: usize = 100;

/// Upper limit on bracket doublings when searching for `K*`.
const MAX_DOUBLINGS: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyKind {
    Bernoulli,
    Gaussian { sigma: f64 },
    Exponential,
}

/// An exponential family together with the known lower bound on arm means.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub theta_lower: f64,
}

impl FamilySpec {
    pub fn bernoulli() -> Self {
        Self {
            kind: FamilyKind::Bernoulli,
            theta_lower: 0.0,
        }
    }

    pub fn gaussian(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::invalid("sigma", format!("must be positive, got {sigma}")));
        }
        Ok(Self {
            kind: FamilyKind::Gaussian { sigma },
            theta_lower: 0.0,
        })
    }

    pub fn exponential() -> Self {
        Self {
            kind: FamilyKind::Exponential,
            theta_lower: 0.0,
        }
    }

    /// Replaces the known lower bound on the means.
    pub fn with_theta_lower(mut self, theta_lower: f64) -> Result<Self> {
        if theta_lower.is_nan() || !self.in_closure(theta_lower) {
            return Err(Error::Domain {
                what: "theta_lower",
                value: theta_lower,
                domain: self.domain_name(),
            });
        }
        self.theta_lower = theta_lower;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if let FamilyKind::Gaussian { sigma } = self.kind {
            if !(sigma > 0.0 && sigma.is_finite()) {
                return Err(Error::invalid("sigma", format!("must be positive, got {sigma}")));
            }
        }
        if self.theta_lower.is_nan() || !self.in_closure(self.theta_lower) {
            return Err(Error::Domain {
                what: "theta_lower",
                value: self.theta_lower,
                domain: self.domain_name(),
            });
        }
        Ok(())
    }

    pub fn sigma(&self) -> Option<f64> {
        match self.kind {
            FamilyKind::Gaussian { sigma } => Some(sigma),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            FamilyKind::Bernoulli => "bernoulli",
            FamilyKind::Gaussian { .. } => "gaussian",
            FamilyKind::Exponential => "exponential",
        }
    }

    /// Closure of the mean domain as `(lo, hi)`.
    pub fn domain(&self) -> (f64, f64) {
        match self.kind {
            FamilyKind::Bernoulli => (0.0, 1.0),
            FamilyKind::Gaussian { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            FamilyKind::Exponential => (0.0, f64::INFINITY),
        }
    }

    fn domain_name(&self) -> &'static str {
        match self.kind {
            FamilyKind::Bernoulli => "[0, 1]",
            FamilyKind::Gaussian { .. } => "the real line",
            FamilyKind::Exponential => "[0, inf)",
        }
    }

    /// Whether `theta` lies in the closure of the mean domain. Gaussian means
    /// must be finite.
    pub fn in_closure(&self, theta: f64) -> bool {
        match self.kind {
            FamilyKind::Bernoulli => (0.0..=1.0).contains(&theta),
            FamilyKind::Gaussian { .. } => theta.is_finite(),
            FamilyKind::Exponential => (0.0..f64::INFINITY).contains(&theta),
        }
    }

    pub fn is_interior(&self, theta: f64) -> bool {
        let (lo, hi) = self.domain();
        self.in_closure(theta) && theta > lo && theta < hi
    }

    /// Projection onto the closed mean domain, the `[.]_Theta` clipping.
    pub fn clip(&self, theta: f64) -> f64 {
        let (lo, hi) = self.domain();
        theta.clamp(lo, hi)
    }

    fn check(&self, what: &'static str, theta: f64) -> Result<()> {
        if self.in_closure(theta) {
            Ok(())
        } else {
            Err(Error::Domain {
                what,
                value: theta,
                domain: self.domain_name(),
            })
        }
    }

    /// Natural parameter `Fdot^{-1}(theta)`; `-inf`/`+inf` at the boundary.
    pub fn mean_to_natural(&self, theta: f64) -> Result<f64> {
        self.check("theta", theta)?;
        Ok(match self.kind {
            FamilyKind::Bernoulli => {
                if theta == 0.0 {
                    f64::NEG_INFINITY
                } else if theta == 1.0 {
                    f64::INFINITY
                } else {
                    (theta / (1.0 - theta)).ln()
                }
            }
            FamilyKind::Gaussian { sigma } => theta / (sigma * sigma),
            FamilyKind::Exponential => {
                if theta == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    -1.0 / theta
                }
            }
        })
    }

    /// Log-partition evaluated at the natural parameter of mean `theta`.
    pub fn log_partition_at_mean(&self, theta: f64) -> Result<f64> {
        self.check("theta", theta)?;
        Ok(match self.kind {
            FamilyKind::Bernoulli => {
                if theta == 1.0 {
                    f64::INFINITY
                } else {
                    -(1.0 - theta).ln()
                }
            }
            FamilyKind::Gaussian { sigma } => theta * theta / (2.0 * sigma * sigma),
            FamilyKind::Exponential => theta.ln(),
        })
    }

    /// `theta * eta - F(eta)` with `eta = Fdot^{-1}(theta)`, taking the
    /// continuous limit at boundary means (`0 * log 0 = 0` for Bernoulli).
    pub fn conjugate_at_mean(&self, theta: f64) -> Result<f64> {
        self.check("theta", theta)?;
        Ok(match self.kind {
            FamilyKind::Bernoulli => xlogx(theta) + xlogx(1.0 - theta),
            FamilyKind::Gaussian { sigma } => theta * theta / (2.0 * sigma * sigma),
            FamilyKind::Exponential => {
                if theta == 0.0 {
                    f64::INFINITY
                } else {
                    -1.0 - theta.ln()
                }
            }
        })
    }

    /// `theta * Fdot^{-1}(theta) - F(Fdot^{-1}(theta))`, evaluated term by
    /// term when both terms are finite and by the limit otherwise.
    fn legendre_pair(&self, theta: f64) -> Result<f64> {
        let eta = self.mean_to_natural(theta)?;
        let f = self.log_partition_at_mean(theta)?;
        if eta.is_finite() && f.is_finite() {
            Ok(theta * eta - f)
        } else {
            self.conjugate_at_mean(theta)
        }
    }

    /// `D(theta1, theta2)` from the per-family closed forms.
    pub fn kl_div(&self, theta1: f64, theta2: f64) -> Result<f64> {
        self.check("theta1", theta1)?;
        self.check("theta2", theta2)?;
        if theta1 == theta2 {
            return Ok(0.0);
        }
        Ok(match self.kind {
            FamilyKind::Bernoulli => {
                if theta2 == 0.0 || theta2 == 1.0 {
                    f64::INFINITY
                } else {
                    let a = if theta1 == 0.0 {
                        0.0
                    } else {
                        theta1 * (theta1 / theta2).ln()
                    };
                    let b = if theta1 == 1.0 {
                        0.0
                    } else {
                        (1.0 - theta1) * ((1.0 - theta1) / (1.0 - theta2)).ln()
                    };
                    (a + b).max(0.0)
                }
            }
            FamilyKind::Gaussian { sigma } => {
                let d = theta1 - theta2;
                d * d / (2.0 * sigma * sigma)
            }
            FamilyKind::Exponential => {
                if theta1 == 0.0 || theta2 == 0.0 {
                    f64::INFINITY
                } else {
                    let r = theta1 / theta2;
                    (r - 1.0 - r.ln()).max(0.0)
                }
            }
        })
    }

    /// `D(theta1, theta2)` through the natural-parameter form
    /// `F(eta2) - F(eta1) - Fdot(eta1) (eta2 - eta1)`, with `Fdot(eta1) = theta1`.
    pub fn kl_div_generic(&self, theta1: f64, theta2: f64) -> Result<f64> {
        self.check("theta1", theta1)?;
        self.check("theta2", theta2)?;
        let eta2 = self.mean_to_natural(theta2)?;
        let f2 = self.log_partition_at_mean(theta2)?;
        if !eta2.is_finite() || !f2.is_finite() {
            return Ok(if theta1 == theta2 { 0.0 } else { f64::INFINITY });
        }
        let eta1 = self.mean_to_natural(theta1)?;
        let f1 = self.log_partition_at_mean(theta1)?;
        let value = if eta1.is_finite() && f1.is_finite() {
            f2 - f1 - theta1 * (eta2 - eta1)
        } else {
            // theta1 * eta1 - F(eta1) taken in the limit.
            f2 - theta1 * eta2 + self.conjugate_at_mean(theta1)?
        };
        Ok(value)
    }

    /// The RBMLE index `I(nu, n, alpha)` evaluated term by term:
    ///
    /// `(n nu + alpha) eta([nu + alpha/n]) - n nu eta(nu) - n F(eta([nu + alpha/n])) + n F(eta(nu))`.
    ///
    /// When the biased mean is clipped to the domain boundary the bias is
    /// reduced to the amount that reaches it, `alpha' = n ([nu + alpha/n] - nu)`,
    /// which for Bernoulli arms gives the `n H(nu)` branch. `n` may be any
    /// positive real, so `xi(k; nu) = biased_gain(nu, k, 1)`.
    pub fn biased_gain(&self, nu: f64, n: f64, alpha: f64) -> Result<f64> {
        self.check("nu", nu)?;
        if !(n > 0.0) {
            return Err(Error::invalid("n", format!("must be positive, got {n}")));
        }
        if !(alpha >= 0.0) {
            return Err(Error::invalid("alpha", format!("must be nonnegative, got {alpha}")));
        }
        if alpha == 0.0 {
            return Ok(0.0);
        }
        let raw = nu + alpha / n;
        let biased = self.clip(raw);
        let effective_alpha = if biased == raw { alpha } else { n * (biased - nu) };

        let eta_b = self.mean_to_natural(biased)?;
        let f_b = self.log_partition_at_mean(biased)?;
        let upper = if eta_b.is_finite() && f_b.is_finite() {
            (n * nu + effective_alpha) * eta_b - n * f_b
        } else {
            n * self.conjugate_at_mean(biased)?
        };

        let eta_nu = self.mean_to_natural(nu)?;
        let f_nu = self.log_partition_at_mean(nu)?;
        let lower = if eta_nu.is_finite() && f_nu.is_finite() {
            n * nu * eta_nu - n * f_nu
        } else {
            n * self.legendre_pair(nu)?
        };
        if upper == lower {
            // covers inf - inf when both pairs sit on the same boundary
            return Ok(0.0);
        }
        Ok(upper - lower)
    }

    /// `xi(k; nu) = k [G(nu + 1/k) - G(nu)]` with `G(theta) = theta eta - F(eta)`,
    /// the clipping applied exactly as in the index.
    pub fn xi(&self, k: f64, nu: f64) -> Result<f64> {
        if !(k > 0.0) {
            return Err(Error::invalid("k", format!("must be positive, got {k}")));
        }
        if k == f64::INFINITY {
            return self.mean_to_natural(nu);
        }
        self.biased_gain(nu, k, 1.0)
    }

    /// Smallest `k` at which `xi(k; theta_lo)` drops below
    /// `Fdot^{-1}(theta_hi)`. Gaussian families use the closed form
    /// `1 / (2 (theta_hi - theta_lo))`; the others bisect.
    pub fn k_star(&self, theta_hi: f64, theta_lo: f64, tol: f64, max_iter: usize) -> Result<f64> {
        match self.kind {
            FamilyKind::Gaussian { .. } => {
                self.check_k_star_args(theta_hi, theta_lo, tol)?;
                Ok(1.0 / (2.0 * (theta_hi - theta_lo)))
            }
            _ => self.k_star_bisection(theta_hi, theta_lo, tol, max_iter),
        }
    }

    fn check_k_star_args(&self, theta_hi: f64, theta_lo: f64, tol: f64) -> Result<()> {
        self.check("theta_hi", theta_hi)?;
        self.check("theta_lo", theta_lo)?;
        if !(theta_hi > theta_lo) {
            return Err(Error::invalid(
                "theta_hi",
                format!("must exceed theta_lo ({theta_hi} <= {theta_lo})"),
            ));
        }
        if !(tol > 0.0) {
            return Err(Error::invalid("tol", format!("must be positive, got {tol}")));
        }
        Ok(())
    }

    /// Start of the region where `xi(.; nu)` is strictly decreasing: the `k`
    /// at which `nu + 1/k` first stops being clipped for bounded domains.
    fn k_star_bracket_start(&self, nu: f64, tol: f64) -> f64 {
        match self.kind {
            FamilyKind::Bernoulli => (1.0 / (1.0 - nu)).max(tol),
            _ => tol,
        }
    }

    /// `K*` by geometric doubling from the bracket start followed by bisection.
    /// The returned value is the upper end of the final bracket, so
    /// `xi(K*) < Fdot^{-1}(theta_hi) <= xi(K* - tol)`.
    pub fn k_star_bisection(&self, theta_hi: f64, theta_lo: f64, tol: f64, max_iter: usize) -> Result<f64> {
        self.check_k_star_args(theta_hi, theta_lo, tol)?;
        let target = self.mean_to_natural(theta_hi)?;
        if !target.is_finite() {
            return Err(Error::NonFinite { theta: theta_hi });
        }
        let degenerate = Error::Degenerate { theta_hi, theta_lo };

        let start = self.k_star_bracket_start(theta_lo, tol);
        let at_start = self.xi(start, theta_lo)?;
        if at_start == f64::NEG_INFINITY {
            return Err(degenerate);
        }
        if target > at_start {
            return match self.kind {
                // On the clipped stretch xi(k) = k H(nu) runs down to 0 as
                // k -> 0, so the infimum is 0.
                FamilyKind::Bernoulli => Err(degenerate),
                _ => Ok(start),
            };
        }

        let mut lo = start;
        let mut hi = 2.0 * start;
        let mut doublings = 0;
        while target <= self.xi(hi, theta_lo)? {
            lo = hi;
            hi *= 2.0;
            doublings += 1;
            if doublings > MAX_DOUBLINGS || !hi.is_finite() {
                return Err(Error::IterationLimit {
                    limit: MAX_DOUBLINGS,
                    lo,
                    hi,
                });
            }
        }

        for _ in 0..max_iter {
            if hi - lo <= tol {
                return Ok(hi);
            }
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if target > self.xi(mid, theta_lo)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        if hi - lo <= tol {
            Ok(hi)
        } else {
            Err(Error::IterationLimit {
                limit: max_iter,
                lo,
                hi,
            })
        }
    }
}

/// `x ln x` with the limit value 0 at `x = 0`.
pub(crate) fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}
