use alloc::string::String;
use core::fmt;

/// Error type shared by every module of the toolkit.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operand dimensions do not match the operation's contract.
    Dimension(String),
    /// A scalar argument lies outside its admissible range.
    Domain(String),
    /// The requested size exceeds a dense-representation cap.
    Capacity(String),
    /// A linear solve met a singular or hopelessly ill-conditioned matrix.
    /// Carries the 1-norm condition estimate (infinite for an exact zero
    /// pivot).
    Singular { condition: f64 },
    /// A generator snapshot produced a substantially negative jump rate.
    NonMarkovian { rate: f64 },
    /// A physical-state or channel validation failed.
    Validation(String),
    /// A run configuration violates a stability or consistency bound.
    Config(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension(msg) => write!(f, "dimension mismatch: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Capacity(msg) => write!(f, "capacity error: {msg}"),
            Error::Singular { condition } => {
                write!(f, "singular system (condition estimate {condition:.3e})")
            }
            Error::NonMarkovian { rate } => {
                write!(f, "non-Markovian snapshot: jump rate {rate:.3e} is substantially negative")
            }
            Error::Validation(msg) => write!(f, "validation error: {msg}"),
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
