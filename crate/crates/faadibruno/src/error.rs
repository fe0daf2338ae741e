use std::fmt;

/// Errors reported by this crate. Every variant names the offending value so
/// callers can surface the message without extra context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A dimension was zero where a positive carrier {1, …, d} is required.
    InvalidDimension { what: &'static str, found: usize },
    /// Two objects that must share a dimension do not.
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    /// A variable label lies outside the carrier {1, …, dim}.
    LabelOutOfRange { label: usize, dim: usize },
    /// A multiset index of cardinality zero was given to an operation that
    /// needs at least one derivative direction.
    EmptyIndex { context: &'static str },
    /// A jet does not hold derivatives up to the requested order.
    InsufficientOrder {
        input: &'static str,
        order: usize,
        needed: usize,
    },
    /// Two partition enumerations passed together do not fit the recursion
    /// they are meant to feed.
    IncompatibleEnumerations { reason: String },
    /// The blocks of a claimed partition do not reassemble its parent.
    NotAPartitionOf { parent: String, blocks: String },
    /// A rational-mode evaluation hit a non-polynomial operation.
    NonPolynomial { operation: &'static str },
    /// Division by zero during expression evaluation or parsing.
    DivisionByZero,
    /// Malformed JSON input (shape or value domain).
    Schema { context: String },
    /// Malformed expression text; `position` is a byte offset into the input.
    Parse { position: usize, message: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDimension { what, found } => {
                write!(f, "{what} must be at least 1, got {found}")
            }
            Error::DimensionMismatch {
                context,
                expected,
                found,
            } => write!(f, "dimension mismatch in {context}: expected {expected}, got {found}"),
            Error::LabelOutOfRange { label, dim } => {
                write!(f, "variable label {label} outside carrier 1..={dim}")
            }
            Error::EmptyIndex { context } => {
                write!(f, "{context} requires a nonempty multiset index")
            }
            Error::InsufficientOrder {
                input,
                order,
                needed,
            } => write!(f, "{input} holds derivatives up to order {order}, need {needed}"),
            Error::IncompatibleEnumerations { reason } => {
                write!(f, "incompatible partition enumerations: {reason}")
            }
            Error::NotAPartitionOf { parent, blocks } => {
                write!(f, "blocks {blocks} do not form a partition of {parent}")
            }
            Error::NonPolynomial { operation } => {
                write!(f, "{operation} is not available in exact rational mode")
            }
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::Schema { context } => write!(f, "invalid input: {context}"),
            Error::Parse { position, message } => {
                write!(f, "parse error at byte {position}: {message}")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
