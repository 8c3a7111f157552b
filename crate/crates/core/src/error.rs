use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("dimension mismatch: expected {expected_users}x{expected_carriers}, got {users}x{carriers}")]
    DimensionMismatch {
        expected_users: usize,
        expected_carriers: usize,
        users: usize,
        carriers: usize,
    },

    #[error("user index {index} out of range for {n_users} users")]
    UserOutOfRange { index: usize, n_users: usize },

    #[error("decoding order is not a permutation of 0..{0}")]
    InvalidOrder(usize),

    #[error("empty carrier set")]
    EmptyCarrierSet,

    #[error("channel gain must be positive and finite, got {0}")]
    NonPositiveGain(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
