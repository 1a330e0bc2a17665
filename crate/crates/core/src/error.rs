use alloc::string::String;
use core::fmt;

/// Errors raised by the algebra, the kernels and the hierarchy solvers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operands live on different qubit counts.
    Dimension { expected: usize, found: usize },
    /// A dense evaluation would exceed the configured qubit cap.
    Resource { what: &'static str, requested: usize, cap: usize },
    /// A precondition on the input was violated.
    Contract(String),
    /// An index or parameter outside its admissible range.
    Domain(String),
    /// The level is too low for the requested rate regime.
    Regime(String),
    /// A kernel coefficient vanishes on a populated homogeneous component.
    SingularKernel { degree: usize },
    /// The semidefinite solver did not reach an optimal point.
    Solver(String),
    /// A constructed certificate failed its own verification.
    Certificate(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension { expected, found } => {
                write!(f, "dimension mismatch: expected n = {expected}, found n = {found}")
            }
            Error::Resource { what, requested, cap } => {
                write!(f, "{what}: requested {requested} exceeds cap {cap}")
            }
            Error::Contract(msg) => write!(f, "contract violation: {msg}"),
            Error::Domain(msg) => write!(f, "out of domain: {msg}"),
            Error::Regime(msg) => write!(f, "rate regime not satisfied: {msg}"),
            Error::SingularKernel { degree } => {
                write!(f, "kernel coefficient c_{degree} vanishes on a populated component")
            }
            Error::Solver(msg) => write!(f, "sdp solver: {msg}"),
            Error::Certificate(msg) => write!(f, "certificate check failed: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
extern crate std;

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
