use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("series diverges at z = 1: deg_{index} P = {degree} exceeds D_{index} = {bound}")]
    Divergent { index: usize, degree: i64, bound: i64 },
    #[error("series is not log-divergent: deg_{index} P = {degree} exceeds D_{index} + 1 = {bound}")]
    NotLogDivergent { index: usize, degree: i64, bound: i64 },
    #[error("shift vector must be zero; normalise the series first")]
    ShiftsNotNormalized,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal contract violated: {0}")]
    ContractViolation(String),
    #[error("recursion budget of {0} terms exhausted")]
    BudgetExceeded(usize),
    #[error("degenerate factor (1 - 1) in a rational coefficient")]
    DegenerateFactor,
    #[error("numerical evaluation failed: {0}")]
    Numeric(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
