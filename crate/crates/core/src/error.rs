use crate::quantum::BellState;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} must lie in [0, 1], got {value}")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("Pauli index must be 0..=3, got {0}")]
    InvalidPauliIndex(u8),

    #[error("Bell state index must be 1..=4, got {0}")]
    InvalidBellIndex(u8),

    #[error("message must be a 2-bit value, got {0}")]
    InvalidMessage(u8),

    #[error("not a valid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("activation times {t1}, {t2}, {t3} are not equal; the channel is not depolarizing")]
    AnisotropicTiming { t1: f64, t2: f64, t3: f64 },

    #[error("invalid timing model: {0}")]
    InvalidTiming(String),

    #[error("invalid conditional table: {0}")]
    InvalidTable(String),

    #[error("invalid prior: {0}")]
    InvalidPrior(String),

    #[error("internal consistency error: {0}")]
    Inconsistent(String),

    #[error(
        "no coincidences recorded for input state {0}; conditional probabilities are undefined"
    )]
    EmptyRow(BellState),

    #[error("invalid experiment configuration: {0}")]
    InvalidConfig(String),

    #[error("sweep needs at least one configuration")]
    EmptySweep,
}
