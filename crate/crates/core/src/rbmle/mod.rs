//! RBMLE indices, bias schedules and theoretical bounds.

pub mod bounds;
pub mod index;
pub mod schedule;

pub use bounds::{theoretical_c_alpha_min, theoretical_regret_bound, BoundParams, BoundVariant};
pub use index::{
    bernoulli_index, closed_form_index, exponential_index, gaussian_index, gaussian_index_scaled, generic_index,
    select_arm, ArmStats, IndexRoute,
};
pub use schedule::{
    adaptive_alpha_bernoulli, adaptive_alpha_exponential, adaptive_alpha_gaussian, AdaptiveAlpha, BetaFn, BiasSchedule,
    ConfidenceSnapshot,
};
