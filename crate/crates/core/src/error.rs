use thiserror::Error;

use crate::sunsearch::SunflowerWitness;

/// Line-level diagnostics for the `.hg` text format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("malformed header, expected three integers `n r m`")]
    MalformedHeader,
    #[error("edge has {found} vertex ids, expected {expected}")]
    WrongArity { expected: usize, found: usize },
    #[error("vertex ids must be strictly increasing")]
    NotIncreasing,
    #[error("vertex id {id} out of range 1..={n}")]
    IdOutOfRange { id: u64, n: u32 },
    #[error("duplicate edge")]
    DuplicateEdge,
    #[error("expected {expected} edges, found {found}")]
    EdgeCountMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {kind}")]
    Parse { line: usize, kind: ParseErrorKind },

    /// A matching branch appeared where a cover was required; the witness is
    /// the sunflower assembled from that matching.
    #[error("sunflower with kernel {} found where freeness was required", .0.kernel)]
    SunflowerFound(Box<SunflowerWitness>),

    /// A 0-uniform link with an edge cannot be covered by any vertex set and
    /// cannot hold two disjoint edges either, so the dichotomy has no branch.
    #[error("0-uniform link with an edge admits neither a matching of size >= 2 nor a cover")]
    UncoverableDegenerate,

    #[error("stage {stage} still below the acceptance threshold after {attempts} resamples")]
    StageRetryExhausted { stage: usize, attempts: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
