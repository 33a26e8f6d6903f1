use thiserror::Error;

/// Errors raised by the listing, tree and map operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("malformed tree: {0}")]
    MalformedTree(String),

    #[error("invalid tree: vertex {vertex} violates the {rule} rule")]
    InvalidTree { vertex: usize, rule: Rule },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("refusing to enumerate {what} on {n} vertices (limit {limit}){}",
        estimate.as_ref().map(|e| format!(", estimated {e} objects")).unwrap_or_default())]
    BoundExceeded { what: &'static str, n: usize, limit: usize, estimate: Option<String> },

    /// A construction produced something its own invariants forbid.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

/// Labelling rule named in a validity report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Leaves carry `a`.
    Leaf,
    /// Non-root internal vertices lie in `[a, b + sum of children]`.
    Internal,
    /// Root label fixed by the root mode.
    Root,
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Rule::Leaf => "leaf",
            Rule::Internal => "internal-vertex",
            Rule::Root => "root",
        })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
