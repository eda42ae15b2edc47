use thiserror::Error;

/// Errors raised by the algebra, absorption, oracle and enumeration layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity must be at least 2, got {0}")]
    InvalidArity(usize),
    #[error("carrier size must be at least 1")]
    EmptyCarrier,
    #[error("table has {actual} entries, expected {expected}")]
    WrongTableLength { expected: usize, actual: usize },
    #[error("table entry {value} at index {index} is outside the carrier of size {size}")]
    EntryOutOfRange { index: usize, value: usize, size: usize },
    #[error("subuniverse must be nonempty")]
    EmptySubuniverse,
    #[error("element {element} is outside the carrier of size {size}")]
    ElementOutOfRange { element: usize, size: usize },
    #[error("carrier of size {0} does not fit a 64-bit member mask")]
    CarrierTooLarge(usize),
    #[error("subuniverse is over a carrier of size {sub}, table has size {table}")]
    SizeMismatch { table: usize, sub: usize },
    #[error("word must have at least one letter and one variable")]
    EmptyWord,
    #[error("letter {letter} is not a variable index below {num_vars}")]
    LetterOutOfRange { letter: usize, num_vars: usize },
    #[error("assignment has {actual} values for a word over {expected} variables")]
    AssignmentLength { expected: usize, actual: usize },
    #[error("a word of length {length} cannot be evaluated by a {arity}-ary operation")]
    LengthNotEvaluable { length: usize, arity: usize },
    #[error("operation is not associative")]
    NotAssociative,
    #[error("subset is not closed under the operation")]
    NotClosed,
    #[error("subuniverse equals the whole carrier")]
    NotProperSubuniverse,
    #[error("target arity {target} is not 1 modulo {step} or not above 1")]
    InvalidArityTarget { target: usize, step: usize },
    #[error("{what} exceeds the configured budget ({detail})")]
    BudgetExceeded { what: &'static str, detail: String },
    #[error("preconditions unmet: {0}")]
    PreconditionsUnmet(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
