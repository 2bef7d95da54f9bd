use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// The policy names no resources, so every team condition is vacuous.
    #[error("the policy resource set P is empty")]
    EmptyPolicy,

    #[error("instance is not normalized (P must equal R and t must not exceed |P|)")]
    NotNormalized,

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("{what} budget exceeded: need {needed}, limit is {limit}")]
    BudgetExceeded {
        what: &'static str,
        needed: u64,
        limit: u64,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid expansion witness: {0}")]
    InvalidWitness(String),

    #[error("{0}")]
    Parse(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}
