use std::path::PathBuf;

use crate::sdp::SolverStatus;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("unphysical Bloch vector of length {length}")]
    Unphysical { length: f64 },

    #[error("parameter set is empty")]
    EmptyParameterSet,

    #[error("density matrix is rank deficient (smallest eigenvalue {min_eigenvalue:e})")]
    RankDeficient { min_eigenvalue: f64 },

    #[error("information matrix is singular or ill-conditioned (condition number {condition:e})")]
    SingularInformation { condition: f64 },

    #[error("POVM elements do not sum to the identity (residual {residual:e})")]
    IncompletePovm { residual: f64 },

    #[error("closed-form expressions are only available for the unbounded scenario")]
    BoundedScenarioUnsupported,

    #[error("equality constraints are inconsistent (residual {residual:e})")]
    InconsistentEqualities { residual: f64 },

    #[error("SDP solver finished with status {status:?}: {detail}")]
    SolverFailure {
        status: SolverStatus,
        detail: String,
    },

    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },

    #[error("range error: {0}")]
    Range(String),

    #[error("column `{0}` is absent")]
    ColumnAbsent(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
