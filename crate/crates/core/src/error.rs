use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: String,
        reason: &'static str,
    },

    #[error("no allocated miners: hash power is undefined for an empty allocation")]
    NoAllocatedMiners,

    #[error("length mismatch: {what} has {got} entries, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },

    #[error("bidder index {index} out of range for a roster of {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("duplicate bidder id {0}")]
    DuplicateId(u64),

    #[error("unknown bidder id {0}")]
    UnknownBidder(u64),

    #[error("bidder {0} is not in the winner set")]
    NotAWinner(u64),

    #[error("bidder {id} has demand {demand}; the mechanism only supports unit demand")]
    VariableDemand { id: u64, demand: String },

    #[error("payment for bidder {id} is {payment}, below the float-noise window")]
    NegativePayment { id: u64, payment: String },

    #[error("exhaustive search refuses {size} bidders (limit {limit})")]
    RosterTooLarge { size: usize, limit: usize },

    #[error("calibration needs at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("malformed sample file at line {line}: {reason}")]
    SampleFormat { line: u64, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid<V: std::fmt::Display>(
    name: &'static str,
    value: V,
    reason: &'static str,
) -> Error {
    Error::InvalidParameter {
        name,
        value: value.to_string(),
        reason,
    }
}
