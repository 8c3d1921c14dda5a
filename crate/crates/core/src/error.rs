//! Error type shared by every module.

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("group closure exceeded the order bound {bound}")]
    OrderBoundExceeded { bound: usize },
    #[error("generator {index} is not invertible")]
    NonInvertible { index: usize },
    #[error("no generators given")]
    NoGenerators,
    #[error("the identity lies in the seed set or its closure (seed {seed})")]
    IdentityInSeed { seed: String },
    #[error("the seed set is empty")]
    EmptySeed,
    #[error("group has no matrix representation")]
    NoRepresentation,
    #[error("element {0} is not in S")]
    NotInS(String),
    #[error("orbit products disagree: {0}")]
    InconsistentOrbit(String),
    #[error("enumeration needs {needed} steps, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("cyclic-space axioms not verified: {0}")]
    AxiomsNotVerified(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("degree {degree} exceeds the bound {bound}")]
    DegreeBound { degree: usize, bound: usize },
    #[error("polynomial is not divisible by {0}")]
    NotDivisible(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element {element} is not a reflection: rank(s - I) = {rank}")]
    NotAReflection { element: String, rank: usize },
    #[error("point lies on a reflecting hyperplane: |<x, a>| = {value:e}")]
    SingularPoint { value: f64 },
    #[error("rejection sampling failed after {attempts} attempts")]
    SamplingExhausted { attempts: usize },
    #[error("S fails condition ({condition}): {detail}")]
    Validation { condition: u8, detail: String },
    #[error("multiplicity is not constant on the conjugacy class of {0}")]
    NonConstantMultiplicity(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("malformed JSON at byte {offset} (line {line}, column {column}): {message}")]
    Json {
        offset: usize,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Converts a `serde_json` error, locating it as a byte offset in `src`.
    pub fn from_json(err: serde_json::Error, src: &str) -> Self {
        let (line, column) = (err.line(), err.column());
        let offset = src
            .split_inclusive('\n')
            .take(line.saturating_sub(1))
            .map(str::len)
            .sum::<usize>()
            + column.saturating_sub(1);
        Error::Json {
            offset,
            line,
            column,
            message: err.to_string(),
        }
    }
}
