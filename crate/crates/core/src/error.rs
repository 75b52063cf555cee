use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("node count {n} is outside the supported range 1..={cap}")]
    NodeCount { n: usize, cap: usize },

    #[error("stability cap {0} is outside the supported range 1..=360")]
    StabilityCap(usize),

    #[error("tridiagonal eigensolver did not converge for n = {0}")]
    EigenSolver(usize),

    #[error("integrand is not finite at {0}")]
    NonFinite(EvalPoint),

    #[error("invalid node range {n_min}..={n_max}")]
    NodeRange { n_min: usize, n_max: usize },

    #[error("slope fit needs {needed} usable epsilon entries but only {available} are available")]
    FitWindow { needed: usize, available: usize },

    #[error("epsilon at n = {0} is zero or round-off dominated; slope is undefined")]
    DegenerateEpsilon(usize),

    #[error("unknown fit method `{0}`; expected `two-point` or `lsq`")]
    UnknownFitMethod(String),

    #[error("unknown kernel id `{0}`")]
    UnknownKernel(String),

    #[error("kernel `{name}` failed the {check} check: {detail}")]
    KernelCheck {
        name: String,
        check: &'static str,
        detail: String,
    },

    #[error("{name} must be {requirement}, got {value}")]
    Domain {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },

    #[error("adaptive integration on [{a}, {b}] did not reach tolerance {tol:e}")]
    NoConvergence { a: f64, b: f64, tol: f64 },
}

/// Location of a non-finite integrand value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvalPoint {
    Node { index: usize, x: f64 },
    Pair { i: usize, j: usize, x: f64, y: f64 },
}

impl std::fmt::Display for EvalPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            EvalPoint::Node { index, x } => write!(f, "node {index} (x = {x})"),
            EvalPoint::Pair { i, j, x, y } => {
                write!(f, "node pair ({i}, {j}) (x = {x}, y = {y})")
            }
        }
    }
}

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain {
            name,
            requirement: "finite and positive",
            value,
        })
    }
}

pub(crate) fn require_non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain {
            name,
            requirement: "finite and non-negative",
            value,
        })
    }
}
