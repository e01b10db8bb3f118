use thiserror::Error;

/// The first S-ring axiom a candidate partition fails.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomViolation {
    #[error("not a partition of the group: {0}")]
    NotAPartition(String),
    #[error("the identity element is not a singleton class")]
    IdentityClass,
    #[error("class {class} has negation {negated:?} that is not a class")]
    InverseClosure { class: usize, negated: Vec<usize> },
    #[error(
        "product of classes {left} and {right} is not constant on class {target}: \
         elements {witness_a} and {witness_b} have coefficients {count_a} and {count_b}"
    )]
    Convolution {
        left: usize,
        right: usize,
        target: usize,
        witness_a: usize,
        witness_b: usize,
        count_a: u32,
        count_b: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group parameters: {0}")]
    InvalidContext(String),
    #[error("index or coordinate out of range: {0}")]
    OutOfRange(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("objects live over different groups")]
    ContextMismatch,
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("matrix is singular mod p")]
    SingularMatrix,
    #[error("permutation degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("time budget exceeded")]
    Timeout,
    #[error("S-ring axiom violated: {0}")]
    Axiom(#[from] AxiomViolation),
    #[error("invalid class id {0}")]
    InvalidClass(usize),
    #[error("subgroup is not an S-ring subgroup (not a union of basic sets)")]
    NotASubgroupOfRing,
    #[error("coset intersection profile is not constant: {0}")]
    NonConstantProfile(String),
    #[error("subspaces do not form a direct sum decomposition of the group")]
    NotDirectSum,
    #[error("wedge product compatibility violated: {0}")]
    Compatibility(String),
    #[error("S-ring is not a p-S-ring")]
    NotPSring,
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("corrupted S-ring: {0}")]
    Corrupted(String),
}

pub type Result<T> = std::result::Result<T, Error>;
