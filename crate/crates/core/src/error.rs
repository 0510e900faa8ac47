use thiserror::Error;

/// Errors raised by every operation in this crate.
///
/// Positions are reported 1-based, matching the row/column convention used
/// throughout the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid generator label: {0}")]
    InvalidLabel(String),

    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("matrix is not Monge (first violation at adjacent minor ({row}, {col}))")]
    NotMonge { row: usize, col: usize },

    #[error("matrix is not in the polytope (first offending position ({row}, {col}))")]
    NotInPolytope { row: usize, col: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unbalanced instance: total supply {supply} != total demand {demand}")]
    Unbalanced { supply: u64, demand: u64 },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("no closed form known for {0}")]
    NoClosedForm(String),

    #[error("unsupported family: {0}")]
    Unsupported(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("degenerate simplex: points are affinely dependent")]
    DegenerateSimplex,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    /// Short machine-readable tag, used in structured error payloads.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidLabel(_) => "invalid-label",
            Error::InvalidSize(_) => "invalid-size",
            Error::Shape(_) => "shape",
            Error::NotMonge { .. } => "not-monge",
            Error::NotInPolytope { .. } => "not-in-polytope",
            Error::Domain(_) => "domain",
            Error::Unbalanced { .. } => "unbalanced",
            Error::ResourceLimit(_) => "resource-limit",
            Error::NoClosedForm(_) => "no-closed-form",
            Error::Unsupported(_) => "unsupported-family",
            Error::Hypothesis(_) => "hypothesis-violation",
            Error::DegenerateSimplex => "degenerate-simplex",
            Error::Parse(_) => "parse",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
