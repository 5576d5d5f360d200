use thiserror::Error;

#[derive(Debug, Error)]
pub enum FareyError {
    /// An input violated a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Arguments that must describe consecutive Farey fractions do not.
    #[error("contract violation: {0}")]
    ContractViolation(String),
    /// A position index fell outside the enumerated sequence.
    #[error("position out of range: {0}")]
    OutOfRange(String),
}

pub type Result<T> = std::result::Result<T, FareyError>;
