use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("budget exceeded: {what} needs at least {estimate} items, budget is {budget}")]
    Resource {
        what: String,
        estimate: u128,
        budget: u128,
    },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("target out of range: {0}")]
    Range(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
