use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),

    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("vertex sets differ: {0}")]
    VertexSetMismatch(String),

    #[error("empty list for vertex `{0}`")]
    EmptyList(String),

    #[error("list for vertex `{0}` is not closed under the switch map")]
    NonSymmetricList(String),

    #[error("not a permutation of the vertex set: {0}")]
    NotPermutation(String),

    #[error("vertex `{0}` is not a leaf")]
    NotALeaf(String),

    #[error("operation table has {got} entries, expected {expected}")]
    TableNotTotal { expected: usize, got: usize },

    #[error("table is not parity symmetric at ({0})")]
    NotParitySymmetric(String),

    #[error("permutable triple ({}, {}, {}) present", .0[0], .0[1], .0[2])]
    PermutableTriple([String; 3]),

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("self-check failed: {0}")]
    SelfCheck(String),

    #[error("instance too large: {size} exceeds limit {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error("graph has a loop at `{0}`")]
    HasLoop(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
