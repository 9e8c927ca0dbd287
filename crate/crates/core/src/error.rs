use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} = {value} lies outside {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("K* target natural parameter is not finite (theta' = {theta})")]
    NonFinite { theta: f64 },

    /// The infimum defining `K*` is zero, so no finite positive threshold exists.
    #[error("K*({theta_hi}, {theta_lo}) is degenerate: the infimum is 0")]
    Degenerate { theta_hi: f64, theta_lo: f64 },

    #[error("no convergence after {limit} iterations, bracket [{lo}, {hi}]")]
    IterationLimit { limit: usize, lo: f64, hi: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("reward lookup out of range: t = {t}, arm = {arm} (horizon {horizon}, {n_arms} arms)")]
    OutOfBounds {
        t: u64,
        arm: usize,
        horizon: u64,
        n_arms: usize,
    },

    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("policy `{policy}` failed at t = {t}: {source}")]
    Policy {
        policy: String,
        t: u64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}
