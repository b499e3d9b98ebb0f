use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A configuration value is out of its allowed range.
    #[error("invalid configuration for `{field}`: {message}")]
    Config {
        field: &'static str,
        message: String,
    },

    /// Exhaustive enumeration would visit more assignments than allowed.
    #[error("enumeration needs {required} assignments but the budget is {budget}")]
    BudgetExceeded { required: String, budget: u64 },

    #[error("internal consistency violated: {0}")]
    Consistency(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Self::InvalidInput(msg.into())
    }

    pub(crate) fn config(field: &'static str, msg: impl Into<String>) -> Self {
        Self::Config {
            field,
            message: msg.into(),
        }
    }
}
