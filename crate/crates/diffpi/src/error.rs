use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("inconsistent quotient basis: {0}")]
    InconsistentBasis(String),

    #[error("associativity fails on basis triple ({0}, {1}, {2})")]
    Associativity(usize, usize, usize),
    #[error("derivation {name} violates the Leibniz rule on basis pair ({i}, {j})")]
    Leibniz { name: String, i: usize, j: usize },
    #[error("bracket [{i}, {j}] of the derivations differs from the declared combination")]
    BracketMismatch { i: usize, j: usize },
    #[error("declared unit fails on basis element {0}")]
    Unit(usize),
    #[error("malformed algebra: {0}")]
    MalformedAlgebra(String),

    #[error("unknown derivation generator {0}")]
    UnknownGenerator(String),
    #[error("label {label} is not below dim W = {dim_w}")]
    InvalidLabel { label: usize, dim_w: usize },
    #[error("no value assigned to variable x{}", .0 + 1)]
    MissingAssignment(u32),
    #[error("polynomial is not multilinear: {0}")]
    NonMultilinear(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("cannot parse polynomial {input:?} at byte {pos}: {msg}")]
    Parse { input: String, pos: usize, msg: String },

    #[error("full enumeration needs {entries} entries, above the cap {cap}; use sampled mode or raise the cap")]
    PlanCapExceeded { entries: u128, cap: u128 },
    #[error("evaluation plan does not apply: {0}")]
    Plan(String),
    #[error("generator {generator} is not an identity: nonzero at basis tuple {tuple:?}")]
    NotAnIdentity { generator: String, tuple: Vec<usize> },
    #[error("multiplicity of {partition} is {value}, not a non-negative integer")]
    BadMultiplicity { partition: String, value: String },

    #[error("invalid tableau: {0}")]
    InvalidTableau(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("truncated Grassmann algebra with {m} generators is too small: need at least {needed}")]
    Truncation { m: usize, needed: usize },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
