use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate pair: both slots are {0}")]
    DegeneratePair(usize),

    #[error("slot {0} out of range 0..4")]
    SlotOutOfRange(usize),

    #[error("direction must be a unit vector (|k| = {0})")]
    NotUnitDirection(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("on shell: wave operator is singular (condition estimate {cond:e})")]
    OnShell { cond: f64 },

    #[error("rest frame only: evaluator carries a boost")]
    RestFrameOnly,

    #[error("unresolved mode: {0}")]
    UnresolvedMode(String),

    #[error("root search did not converge: {0}")]
    NoConvergence(String),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
