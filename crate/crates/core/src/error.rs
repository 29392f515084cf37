use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index {index} exceeds the supported range |n| <= {cap}")]
    IndexOutOfRange { index: i64, cap: u64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("inexact division by {divisor} while evaluating {what}")]
    InexactDivision { what: &'static str, divisor: u32 },

    #[error("request of {requested} items exceeds the budget of {budget}")]
    BudgetExceeded { requested: String, budget: u64 },

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("position k = {k} out of range 1..={max}")]
    PositionOutOfRange { k: usize, max: usize },

    #[error("coin probabilities are not normalized: {0}")]
    InvalidCoin(String),

    #[error("pole of the generating function at x = {x}")]
    Pole { x: f64 },

    #[error("|x| = {x} lies outside the convergence radius {radius}")]
    OutsideConvergence { x: f64, radius: f64 },

    #[error("zero denominator: {0}")]
    ZeroDenominator(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("projection has zero probability")]
    ZeroProbability,

    #[error("unsupported: {0}")]
    Unsupported(String),
}
