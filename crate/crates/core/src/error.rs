use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A 1-based index fell outside `1..=len`.
    IndexOutOfRange { index: usize, len: usize },
    /// Two objects that must agree in length or shape did not.
    DimensionMismatch { expected: usize, found: usize },
    /// An enumeration would exceed its configured size cap.
    CapExceeded {
        what: &'static str,
        requested: u64,
        cap: u64,
    },
    /// The code parameter `m` is below 2.
    InvalidM(u32),
    /// An argument is outside the operation's domain.
    InvalidArgument(String),
    /// An operation that needs a nonempty set received an empty one.
    EmptySet,
    /// The word handed to a decoder has a nonzero syndrome.
    NotACodeword,
    /// Two routes to the same quantity disagreed, or a count went negative.
    Inconsistent(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range 1..={len}")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::CapExceeded {
                what,
                requested,
                cap,
            } => write!(f, "{what}: {requested} exceeds the cap of {cap}"),
            Error::InvalidM(m) => write!(f, "invalid m = {m}: m must satisfy m >= 2"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::EmptySet => f.write_str("operation requires a nonempty set"),
            Error::NotACodeword => f.write_str("word is not a codeword"),
            Error::Inconsistent(msg) => write!(f, "internal inconsistency: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn check_m(m: u32) -> Result<()> {
    if m < 2 {
        Err(Error::InvalidM(m))
    } else {
        Ok(())
    }
}
