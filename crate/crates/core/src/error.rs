use thiserror::Error;

/// Errors shared by the library.
#[derive(Debug, Error, PartialEq)]
pub enum Error {
    /// Two grid functions with different sample counts were combined.
    #[error("grid size mismatch: expected {expected} samples, got {got}")]
    GridSizeMismatch { expected: usize, got: usize },

    /// An element does not live in the space an operation expects.
    #[error("space mismatch: expected {expected}, got {got}")]
    SpaceMismatch { expected: String, got: String },

    /// Axiom checking needs at least one sample.
    #[error("empty sample set")]
    EmptySamples,

    /// Iterated mean order out of the supported range.
    #[error("transform order {0} out of range (0..=8)")]
    InvalidOrder(u32),

    /// A parameter grid or window failed validation.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A sequence name or synthetic kind the catalog does not know.
    #[error("unknown sequence: {0}")]
    UnknownSequence(String),

    /// A diagnostic asked for more terms than a transform table holds.
    #[error("table holds {len} terms but {needed} are required")]
    TableTooShort { needed: u64, len: u64 },

    /// Lemma checks require a certificate produced by the search.
    #[error("uncertified (lambda, m0) parameters: {0}")]
    Uncertified(String),
}
