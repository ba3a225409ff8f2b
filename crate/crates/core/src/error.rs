use thiserror::Error;

use crate::hexnet::CellId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cell {0} is not part of the network")]
    UnknownCell(CellId),

    #[error("request #{index} targets cell {cell}, which is not part of the network")]
    UnknownRequestCell { index: usize, cell: CellId },

    #[error("omega = {omega} is not divisible by {divisor} ({what})")]
    Divisibility {
        omega: u32,
        divisor: u32,
        what: String,
    },

    #[error("omega must be positive")]
    ZeroOmega,

    #[error("frequency {frequency} is outside 1..={omega}")]
    FrequencyOutOfRange { frequency: u32, omega: u32 },

    #[error("cannot assign frequency {frequency} to cell {cell}: {reason}")]
    IllegalAssignment {
        cell: CellId,
        frequency: u32,
        reason: String,
    },

    #[error("network is not triangle-free")]
    NotTriangleFree,

    #[error("instance too large for {solver}: {detail}")]
    TooLarge {
        solver: &'static str,
        detail: String,
    },

    #[error("demand vector has {got} entries, network has {expected} cells")]
    DemandShape { expected: usize, got: usize },

    #[error("trace and optimum are defined over different cell sets")]
    NetworkMismatch,

    #[error("unknown algorithm selector {0:?} (expected greedy, caco, caco2 or partition:x:y)")]
    UnknownAlgorithm(String),

    #[error("unknown adversary selector {0:?} (expected fig2, fig3 or random:<seed>:<length>)")]
    UnknownAdversary(String),

    #[error("{0}")]
    Invalid(String),
}
