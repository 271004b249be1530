//! Base inertial parameters of rigid multibody mechanisms.
//!
//! Two independent routes are provided: a numeric one (observation matrix
//! from random-trajectory inverse dynamics, SVD at selectable precision) and
//! a symbolic one (multipole transfers over exact rational functions of the
//! geometry). The `sla` module carries the short/long-arm suspension fixture.

pub mod cli;
pub mod dynamics;
pub mod expr;
pub mod invariance;
pub mod kinematics;
pub mod linalg;
pub mod model;
pub mod numeric_base;
pub mod precision;
pub mod sla;
pub mod svd;
pub mod symbolic;

pub use model::{load_mechanism, GeomParams, InertialParams, Mechanism, ParamVector};
pub use precision::{PScalar, PrecisionLevel};

/// Errors across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid model: {0}")]
    Validation(String),
    #[error("unbound geometry symbol '{0}'")]
    UnboundSymbol(String),
    #[error("division by zero in '{0}'")]
    DivisionByZero(String),
    #[error("precision error: {0}")]
    Precision(String),
    #[error("value is not rational: {0}")]
    NonRational(String),
    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("constraint Jacobian is singular (condition {condition:e})")]
    SingularJacobian { condition: f64 },
    #[error("kinematics failed at sample {sample}: {source}")]
    Kinematics {
        sample: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("SVD did not converge within {0} sweeps")]
    SvdNoConvergence(usize),
    #[error("pinned parameters cannot be dependent: {0}")]
    PinnedSingular(String),
    #[error("no base parameter set: {0}")]
    Unsolvable(String),
    #[error("transfer rule violated: {0}")]
    RuleViolation(String),
    #[error("plan step {index}: {source}")]
    PlanStep {
        index: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("I/O error: {0}")]
    Io(String),
    #[error("JSON error: {0}")]
    Json(String),
    #[error("tolerance breached: {0}")]
    ToleranceBreach(String),
    #[error("unknown parameter: {0}")]
    UnknownParameter(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
