use thiserror::Error;

use crate::learners::QueryLedger;

/// Errors produced by the geometry, generator, clustering and learner layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("instance invariant violated: {0}")]
    InstanceInvariant(String),

    #[error("empty level set: {0}")]
    EmptyLevelSet(String),

    #[error("generation failed: {0}")]
    Generation(String),

    #[error("sampler acceptance rate {rate:.2e} is below 1e-4 (instance too thin)")]
    SamplerEfficiency { rate: f64 },

    #[error("label budget of {budget} queries exhausted")]
    BudgetExhausted { budget: u64 },

    #[error("point lies outside the support of every class")]
    NoClass,

    #[error("learner stopped early: {reason}")]
    Partial {
        reason: String,
        ledger: Box<QueryLedger>,
    },

    #[error("degenerate instance: {0}")]
    Degenerate(String),

    #[error("no planes detected")]
    NoPlanesDetected,

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    TomlDe(#[from] toml::de::Error),

    #[error(transparent)]
    TomlSer(#[from] toml::ser::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
