use thiserror::Error;

/// Errors raised by dataset validation, parameter checks and the solvers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dataset is empty")]
    EmptyDataset,

    #[error("string {row} has length {found}, expected {expected}")]
    RaggedLength { row: usize, expected: usize, found: usize },

    #[error("symbol {symbol:?} at string {row}, position {position} is not in the alphabet")]
    ForeignSymbol { row: usize, position: usize, symbol: String },

    #[error("string has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("symbol id {0} is outside the alphabet")]
    UnknownSymbol(u32),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} needs {needed} but the cap is {cap}")]
    CapExceeded { what: &'static str, needed: u128, cap: u128 },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("solver did not converge: {0}")]
    NonConvergent(String),

    #[error("unavailable: {0}")]
    Unavailable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
