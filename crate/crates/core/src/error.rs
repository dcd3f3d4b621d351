use thiserror::Error;

/// Errors raised by the library. Every fallible operation returns this type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("zero exponent at byte {position}")]
    ZeroExponent { position: usize },

    #[error("generator g{index} out of range for k = {k}")]
    GeneratorOutOfRange { index: usize, k: usize },

    #[error("word has {len} letters, more than the limit of {limit}")]
    WordTooLong { len: u128, limit: usize },

    #[error("word is not cyclically reduced")]
    NotCyclicallyReduced,

    #[error("operation requires a nonempty word")]
    EmptyWord,

    #[error("word power must be positive")]
    ZeroPower,

    #[error("graph is not admissible")]
    NotAdmissible,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("permutations act on different sets: [{expected}] vs [{found}]")]
    SizeMismatch { expected: usize, found: usize },

    #[error("expected {expected} permutations, got {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("no permutation of [{n}] has all cycle lengths in {allowed}")]
    Infeasible { n: usize, allowed: String },

    #[error("no feasible size in [{from}, {to}]")]
    NoFeasibleSize { from: usize, to: usize },

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("graph has {vertices} vertices, above the enumeration cap of {cap}")]
    TooManyVertices { vertices: usize, cap: usize },

    #[error("no legal direct extension exists")]
    NoLegalExtension,

    #[error("invalid graph document: {0}")]
    GraphFormat(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
