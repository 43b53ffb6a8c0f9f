//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when configuring or analyzing a walk.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("part sizes must be at least 1, got m = {m}, n = {n}")]
    EmptyPart { m: usize, n: usize },

    #[error("same-part transfer needs at least two vertices in part 1, got m = {m}")]
    SamePartTooSmall { m: usize },

    #[error("sender vertex {sender} out of range 1..={m}")]
    SenderOutOfRange { sender: usize, m: usize },

    #[error("receiver vertex {receiver} out of range 1..={limit}")]
    ReceiverOutOfRange { receiver: usize, limit: usize },

    #[error("sender and receiver must be distinct vertices, both are {vertex}")]
    MarkedCoincide { vertex: usize },

    #[error("state and operator were built from different walk parameters")]
    ParamsMismatch,

    #[error("dense reference guard: m*n = {product} exceeds the limit {limit}")]
    OracleTooLarge { product: usize, limit: usize },

    #[error(
        "the 3x3 reduced model needs m >= 3, got m = {m}; the 2x2 degenerate builder covers m = 2"
    )]
    ReducedSameTooSmall { m: usize },

    #[error("the degenerate reduced builder is defined for m = 2 only, got m = {m}")]
    NotDegenerate { m: usize },

    #[error("the 4x4 reduced model needs m, n >= 2, got m = {m}, n = {n}")]
    ReducedOppositeTooSmall { m: usize, n: usize },

    #[error("closed-form fidelity is defined at odd step counts only, got {steps}")]
    EvenSteps { steps: usize },

    #[error("no closed-form fidelity curve exists for the same-part layout")]
    ClosedFormUnavailable,
}
