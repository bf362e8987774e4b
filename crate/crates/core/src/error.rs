use std::fmt;

use thiserror::Error;

use crate::modelspec::ParseError;

/// Named assumption checks on the fast generator.
///
/// The string forms are part of the CLI contract.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AssumptionCheck {
    NotDissipative,
    ZeroNotSemisimple,
    NotDfs,
    KrausNotScalarOnDfs,
    NotCompletelyPositive,
}

impl AssumptionCheck {
    pub fn as_str(self) -> &'static str {
        match self {
            AssumptionCheck::NotDissipative => "not_dissipative",
            AssumptionCheck::ZeroNotSemisimple => "zero_not_semisimple",
            AssumptionCheck::NotDfs => "not_dfs",
            AssumptionCheck::KrausNotScalarOnDfs => "kraus_not_scalar_on_dfs",
            AssumptionCheck::NotCompletelyPositive => "not_completely_positive",
        }
    }
}

impl fmt::Display for AssumptionCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: String,
        expected: usize,
        found: usize,
    },

    #[error("{what} is not Hermitian (max |A - A^dagger| = {deviation:e})")]
    NotHermitian { what: String, deviation: f64 },

    #[error("{what} is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { what: String, min_eigenvalue: f64 },

    #[error("{what} has trace {trace:e}, expected 1")]
    BadTrace { what: String, trace: f64 },

    #[error("non-finite values in {0}")]
    NonFinite(String),

    #[error("linear algebra failure: {0}")]
    Linalg(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("evaluation error: {0}")]
    Eval(String),

    #[error("model schema error: {0}")]
    Schema(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("assumption violated ({check}): {detail}")]
    Assumption {
        check: AssumptionCheck,
        detail: String,
    },

    #[error("second-order reduction unavailable: {0}")]
    Order2Unavailable(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn dims(context: impl Into<String>, expected: usize, found: usize) -> Self {
        Error::DimensionMismatch {
            context: context.into(),
            expected,
            found,
        }
    }

    pub fn assumption(check: AssumptionCheck, detail: impl Into<String>) -> Self {
        Error::Assumption {
            check,
            detail: detail.into(),
        }
    }

    /// Label an error with the pipeline stage that produced it.
    pub fn at(self, stage: &'static str) -> Self {
        match self {
            e @ Error::Stage { .. } => e,
            e => Error::Stage {
                stage,
                source: Box::new(e),
            },
        }
    }

    /// Failed assumption check, looking through stage labels.
    pub fn root_check(&self) -> Option<AssumptionCheck> {
        match self.root() {
            Error::Assumption { check, .. } => Some(*check),
            _ => None,
        }
    }

    /// Innermost error with stage labels removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            e => e,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
