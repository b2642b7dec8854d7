use std::fmt;

/// Errors produced across the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The characteristic handed to a field constructor is not prime.
    NotPrime(u32),
    /// The requested order is not a prime power.
    NotPrimePower(u32),
    /// The supplied modulus polynomial is not irreducible over F_p.
    ReducibleModulus,
    /// The requested field order exceeds the supported cap.
    UnsupportedSize(u64),
    DivisionByZero,
    /// An index, exponent, or degree lies outside its documented range.
    OutOfRange(&'static str),
    /// Multinomial parts do not sum to the stated total.
    BadPartition,
    /// Some term of the numerator is missing a divisor variable.
    NotDivisible,
    /// A composed monomial would exceed per-variable degree q-1.
    DegreeOverflow,
    /// A point or exponent vector has the wrong number of coordinates.
    ArityMismatch,
    /// Two objects live on different domains (n mismatch).
    DomainMismatch,
    /// Two objects live over different fields.
    FieldMismatch,
    /// Padding cannot reduce arity.
    ShrinkNotAllowed,
    /// The polynomial vanishes at every point, so it induces no constraint.
    ZeroFunction,
    /// The requested arity is below what the construction needs.
    ArityTooSmall { required: usize },
    /// An exhaustive enumeration would exceed the configured budget.
    EnumerationBudget { needed: u128, budget: u64 },
    /// CLI-level I/O failure.
    Io(String),
    /// CLI-level parse failure (JSON or argument syntax).
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::NotPrimePower(q) => write!(f, "{q} is not a prime power"),
            Error::ReducibleModulus => write!(f, "modulus polynomial is reducible"),
            Error::UnsupportedSize(q) => write!(f, "field order {q} exceeds the supported cap"),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::OutOfRange(what) => write!(f, "{what} out of range"),
            Error::BadPartition => write!(f, "parts do not sum to the stated total"),
            Error::NotDivisible => {
                write!(f, "polynomial is not divisible by the requested variables")
            }
            Error::DegreeOverflow => write!(f, "total degree exceeds q-1"),
            Error::ArityMismatch => write!(f, "wrong number of coordinates"),
            Error::DomainMismatch => write!(f, "objects live on different domains"),
            Error::FieldMismatch => write!(f, "objects live over different fields"),
            Error::ShrinkNotAllowed => write!(f, "padding cannot reduce arity"),
            Error::ZeroFunction => write!(f, "polynomial vanishes everywhere"),
            Error::ArityTooSmall { required } => {
                write!(f, "arity too small: the construction needs n >= {required}")
            }
            Error::EnumerationBudget { needed, budget } => {
                write!(f, "enumeration needs {needed} steps, budget is {budget}")
            }
            Error::Io(msg) => write!(f, "io error: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
