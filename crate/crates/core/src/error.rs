use thiserror::Error;

use crate::brace::Diagnostic;
use crate::table::GroupFailure;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed table: {0}")]
    MalformedTable(String),
    #[error("not a group: {0}")]
    NotAGroup(GroupFailure),
    #[error("semi-brace axiom violated: {0}")]
    Axiom(Diagnostic),
    #[error("parameter constraint violated: {0}")]
    Parameter(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal invariant broken: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl From<Diagnostic> for Error {
    fn from(d: Diagnostic) -> Self {
        Error::Axiom(d)
    }
}
