use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty pattern")]
    EmptyPattern,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("symbol {symbol:?} is not in the alphabet")]
    UnknownSymbol { symbol: char },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("integrity error: {0}")]
    Integrity(String),

    /// No run of `k - 1` unmarked positions exists in the trace, so the
    /// extension argument does not apply. Compare against the `(k-1)`-trace.
    #[error("no run of {needed} consecutive unmarked positions; the gap lemma applies")]
    GapLemmaApplies { needed: usize },

    #[error("resource limit exceeded: {0}")]
    Budget(String),

    #[error("invalid word spec {spec:?}: {reason}")]
    InvalidSpec { spec: String, reason: String },
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
