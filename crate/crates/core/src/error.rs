use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::quadrature::QuadResult;

/// Errors produced anywhere in the core crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Malformed expression text.
    Syntax {
        offset: usize,
        expected: Vec<&'static str>,
        message: String,
    },
    /// An identifier outside `{x, abs, exp, ln, sqrt, pi, e}`.
    UnknownIdentifier {
        name: String,
        offset: usize,
    },
    /// Evaluation produced an infinite or undefined value.
    NonFiniteValue {
        x: f64,
    },
    /// No piecewise guard covers the argument.
    OutOfDomain {
        x: f64,
    },
    UnknownFixture(String),
    LambdaOutOfRange {
        lambda: f64,
    },
    /// Adaptive quadrature ran out of subdivisions; carries the best effort.
    ToleranceNotReached(QuadResult),
    /// The dominating function failed its own class membership check.
    PrereqFailed {
        reason: String,
    },
    InvalidInterval {
        a: f64,
        b: f64,
    },
    InvalidConfig(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Syntax {
                offset,
                expected,
                message,
            } => {
                write!(f, "syntax error at byte {offset}: {message}")?;
                if !expected.is_empty() {
                    write!(f, " (expected one of: {})", expected.join(", "))?;
                }
                Ok(())
            }
            Error::UnknownIdentifier { name, offset } => {
                write!(f, "unknown identifier `{name}` at byte {offset}")
            }
            Error::NonFiniteValue { x } => write!(f, "non-finite value at x = {x}"),
            Error::OutOfDomain { x } => write!(f, "no piecewise guard covers x = {x}"),
            Error::UnknownFixture(name) => write!(f, "unknown fixture `{name}`"),
            Error::LambdaOutOfRange { lambda } => {
                write!(f, "lambda = {lambda} outside the admissible range")
            }
            Error::ToleranceNotReached(r) => write!(
                f,
                "tolerance not reached: value {} with error estimate {} after {} evaluations",
                r.value, r.error_estimate, r.evaluations
            ),
            Error::PrereqFailed { reason } => write!(f, "prerequisite failed: {reason}"),
            Error::InvalidInterval { a, b } => {
                write!(f, "invalid interval [{a}, {b}]: need finite a < b")
            }
            Error::InvalidConfig(what) => write!(f, "invalid configuration: {what}"),
        }
    }
}

impl core::error::Error for Error {}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "SyntaxError",
            Error::UnknownIdentifier { .. } => "UnknownIdentifier",
            Error::NonFiniteValue { .. } => "NonFiniteValue",
            Error::OutOfDomain { .. } => "OutOfDomain",
            Error::UnknownFixture(_) => "UnknownFixture",
            Error::LambdaOutOfRange { .. } => "LambdaOutOfRange",
            Error::ToleranceNotReached(_) => "ToleranceNotReached",
            Error::PrereqFailed { .. } => "PrereqFailed",
            Error::InvalidInterval { .. } => "InvalidInterval",
            Error::InvalidConfig(_) => "InvalidConfig",
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
