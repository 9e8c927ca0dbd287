//! Reward-biased maximum likelihood (RBMLE) index policies for
//! exponential-family multi-armed bandits.
//!
//! The crate is organised bottom-up:
//!
//! - [`family`]: exponential-family maps, KL divergence, the normalised
//!   index `xi` and the exploration threshold `K*`.
//! - [`rbmle`]: RBMLE indices (generic and closed form), bias schedules
//!   (fixed and adaptive) and the theoretical `C_alpha` / regret bounds.
//! - [`baselines`]: UCB, UCB-Tuned, MOSS, KL-UCB, Thompson sampling,
//!   Bayes-UCB, GP-UCB and GP-UCB-Tuned.
//! - [`env`] and [`rng`]: bandit instances and counter-based reward tables
//!   that give every policy the same sample path.
//! - [`policy`] and [`harness`]: runnable policies, trials, pseudo-regret
//!   accounting, aggregation and timing sweeps.
//! - [`verify`] and [`cli`]: property suites and the command-line front end.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod cli;
pub mod env;
pub mod error;
pub mod family;
pub mod harness;
pub mod policy;
pub mod rbmle;
pub mod rng;
pub mod verify;

pub use error::{Error, Result};
pub use family::{FamilyKind, FamilySpec};
