use thiserror::Error;

/// Errors raised by model evaluation, preorder predicates and order checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: left has {left} entries, right has {right}")]
    Dimension { left: usize, right: usize },

    #[error("{what} is outside its domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("{what} is not representable at t = {t}: survival has underflowed")]
    Range { what: &'static str, t: f64 },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("non-finite value {value} at t = {t}")]
    Evaluation { t: f64, value: f64 },

    #[error("could not generate an instance satisfying {constraint} after {attempts} attempts")]
    Generation { constraint: String, attempts: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
