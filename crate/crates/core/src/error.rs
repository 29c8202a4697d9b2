use alloc::string::String;
use core::fmt;

use crate::kernel::{Arr, Obj};

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A table references an id that does not resolve, or is missing an entry.
    MalformedTable(String),
    NotACospan { f: Arr, g: Arr },
    SearchBudgetExceeded { cap: u64 },
    /// No cartesian lift of `u` into `y` exists.
    NotAFibration { u: Arr, y: Obj },
    PreconditionFailed(String),
    CapExceeded { requested: usize, cap: usize },
    /// Two routes that must agree by a theorem disagreed. Always a bug.
    InternalDisagreement(String),
    /// A constructive step that a theorem guarantees came up empty.
    TheoremViolation(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::MalformedTable(m) => write!(f, "malformed table: {m}"),
            Error::NotACospan { f: a, g } => {
                write!(f, "arrows #{} and #{} do not share a codomain", a.0, g.0)
            }
            Error::SearchBudgetExceeded { cap } => {
                write!(f, "search budget of {cap} candidate inspections exceeded")
            }
            Error::NotAFibration { u, y } => {
                write!(f, "no cartesian lift of base arrow #{} into object #{}", u.0, y.0)
            }
            Error::PreconditionFailed(m) => write!(f, "precondition failed: {m}"),
            Error::CapExceeded { requested, cap } => {
                write!(f, "size {requested} exceeds the configured cap {cap}")
            }
            Error::InternalDisagreement(m) => write!(f, "internal disagreement: {m}"),
            Error::TheoremViolation(m) => write!(f, "theorem violation: {m}"),
        }
    }
}

impl core::error::Error for Error {}
