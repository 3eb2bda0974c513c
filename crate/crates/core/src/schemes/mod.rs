//! Measurement schemes: named measurement sequences over symbolic roles,
//! their execution on a register, exact branch enumeration and the
//! built-in library.

mod affine;
mod branches;
mod format;
mod library;
mod run;
mod scheme;

pub use affine::{AffineBit, MAX_TERMS};
pub use branches::{enumerate_branches, Branch, MAX_ENUMERATED_STEPS};
pub use format::{parse_scheme, parse_schemes, serialize_scheme};
pub use library::{builtin_library, Library};
pub use run::{run_scheme, Binding, SchemeRun, StepRecord};
pub use scheme::{
    ByproductRule, Family, MeasurementScheme, MeasurementStep, SchemeParts, Target, MAX_ROLES, MAX_STEPS,
};

use crate::quantum::QuantumError;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SchemeError {
    #[error("unknown role `{0}`")]
    UnknownRole(String),
    #[error("role `{0}` is not bound")]
    UnboundRole(String),
    #[error("binding collision: {0}")]
    BindingCollision(String),
    #[error("scheme `{scheme}`: {message}")]
    Invalid { scheme: String, message: String },
    #[error("expected {expected} outcomes, got {got}")]
    OutcomeCount { expected: usize, got: usize },
    #[error("{steps} steps exceed the enumeration limit of {max}")]
    TooManySteps { steps: usize, max: usize },
    #[error("unknown scheme `{0}`")]
    UnknownScheme(String),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}
