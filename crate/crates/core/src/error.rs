//! Error types shared across the crate.

use thiserror::Error;

use crate::field::FieldSpec;

pub type Result<T> = std::result::Result<T, Error>;

/// Parse failure with a source location (1-based line and column).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is too large (must be < 2^31)")]
    ModulusTooLarge(u64),
    #[error("unknown field {0:?} (expected Q or F<p>)")]
    InvalidField(String),
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: FieldSpec, right: FieldSpec },
    #[error("{context}: expected dimension {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquareMatrix { rows: usize, cols: usize },
    #[error("invalid scalar {text:?} in {field}: {reason}")]
    InvalidScalar {
        text: String,
        field: FieldSpec,
        reason: String,
    },
    #[error("basis index e{index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("duplicate product for (e{i}, e{j})")]
    DuplicateProduct { i: usize, j: usize },
    #[error("completion conflict at (e{i}, e{j}): stored value contradicts the completion rule")]
    CompletionConflict { i: usize, j: usize },
    #[error("alternating product violated: [e{i}, e{i}] must be zero in a Lie table")]
    AlternatingViolated { i: usize },
    #[error("operation requires a Lie table (anticommutative + Jacobi): {context}")]
    NotLieTable { context: &'static str },
    #[error("algebra is not nilpotent")]
    NotNilpotent,
    #[error("nilindex is {found}, but this construction requires {expected}")]
    WrongNilindex { expected: String, found: String },
    #[error("algebra has {found} generators, but this construction requires {expected}")]
    WrongGeneratorCount { expected: usize, found: usize },
    #[error("degenerate in characteristic 2: the doubling map vanishes and the construction collapses")]
    DegenerateInChar2,
    #[error("no suitable scaling parameter in {field}: every nonzero element has square 0 or 1")]
    NoSuitableScalar { field: FieldSpec },
    #[error("scaling parameter {eps} is unsuitable: its square is 0 or 1")]
    UnsuitableEpsilon { eps: String },
    #[error("map is not a derivation ({context})")]
    NotADerivation { context: String },
    #[error("map is not nilpotent; exponential is not a finite sum")]
    NotNilpotentMap,
    #[error("{k}! is not invertible modulo {modulus}")]
    FactorialNotInvertible { k: u64, modulus: u64 },
    #[error("derivation is trivial (zero map); construction needs a nonzero one")]
    TrivialDerivation,
    #[error("restriction construction precondition failed: {reason}")]
    RestrictionPrecondition { reason: String },
    #[error("no verified witness at point {point}")]
    WitnessUnavailable { point: String },
    #[error("probe list must be nonempty")]
    EmptyProbes,
    #[error("seed required for randomized sampling (--seed or NILPO_SEED)")]
    SeedRequired,
    #[error("unknown catalog entry {0:?}")]
    UnknownCatalogEntry(String),
    #[error("missing parameter {name} for this catalog entry")]
    MissingParameter { name: &'static str },
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("JSON error: {0}")]
    Json(String),
    #[error("internal re-verification failed: {context}")]
    Verification { context: String },
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
