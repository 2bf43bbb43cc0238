use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid slit set: {0}")]
    InvalidSlitSet(String),

    #[error("length mismatch: expected {expected} detector phases, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("enumeration limit exceeded: N = {n}, M = {m} needs {terms} terms (budget {budget})")]
    EnumerationLimit {
        n: usize,
        m: usize,
        terms: u128,
        budget: u128,
    },

    #[error("recursion budget exceeded: {n} slits (max {max})")]
    RecursionBudget { n: usize, max: usize },

    #[error("degenerate normalization: central peak is {0}")]
    DegenerateNormalization(f64),

    #[error("out of supported range: {0}")]
    Range(String),
}
