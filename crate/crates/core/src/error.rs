use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("exponent {exponent} exceeds the configured bound {bound}")]
    ExponentOverflow { exponent: u32, bound: u32 },

    #[error("malformed budget: {0}")]
    MalformedBudget(&'static str),

    #[error("relation index {0} out of range")]
    RelationIndex(usize),

    #[error("invalid rule instance: {0}")]
    InvalidRule(String),

    #[error("certificate concludes {found}, expected {expected}")]
    ConclusionMismatch { expected: String, found: String },

    #[error("pair {0} is not a member of the relation set")]
    NotInRelation(String),

    #[error("homomorphism does not cover generator {0}")]
    UncoveredGenerator(usize),

    #[error("homomorphism fails verification: {0}")]
    NotMonotone(String),

    #[error("{0} must be nonzero")]
    ZeroElement(&'static str),

    #[error("empty parameter box for `{0}`")]
    EmptyBox(String),

    #[error("witness error: {0}")]
    Witness(String),

    #[error("missing power-universal coverage for {0}")]
    MissingCoverage(String),

    #[error("no k <= {0} puts the element into S-")]
    NoMinusExponent(u32),

    #[error("extension contract violated: {0}")]
    Extension(String),

    #[error("element {0} is not a product of the multiplicative set's generators")]
    NotInMultSet(String),

    #[error("presentation is degenerate: {0}")]
    Degenerate(String),

    #[error("soundness violation: {0}")]
    SoundnessViolation(String),

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
