use std::fmt;

/// Errors surfaced by the exact-arithmetic and orbit layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Mixing elements of Q(sqrt(d)) and Q(sqrt(d')) with d != d'.
    FieldMismatch { left: u64, right: u64 },
    DivisionByZero,
    /// An operation required an irrational argument (q != 0).
    RationalInput(String),
    /// Series evaluation requires |ratio| < 1.
    RatioOutOfRange(String),
    /// A word failed a structural precondition (alphabet, class, aperiodicity).
    BadWord(String),
    /// An enclosure stayed ambiguous after the escalation limit.
    Inconclusive(String),
    /// Word-spec or number-literal syntax error, with byte offset.
    Parse { offset: usize, message: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::FieldMismatch { left, right } => {
                write!(f, "incompatible quadratic fields: sqrt({left}) vs sqrt({right})")
            }
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::RationalInput(what) => write!(f, "{what}: argument must be irrational"),
            Error::RatioOutOfRange(r) => write!(f, "ratio {r} outside (-1, 1)"),
            Error::BadWord(msg) => write!(f, "bad word: {msg}"),
            Error::Inconclusive(msg) => write!(f, "inconclusive after escalation: {msg}"),
            Error::Parse { offset, message } => write!(f, "parse error at byte {offset}: {message}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
