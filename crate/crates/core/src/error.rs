use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Where an embedding step ran out of candidates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingFailure {
    pub tree: usize,
    pub piece: usize,
    /// Which placement rule was active ("case1", "case2", "case3", "children", ...).
    pub case: String,
    /// Sizes of the candidate sets that were examined, innermost last.
    pub candidate_sizes: Vec<usize>,
}

impl fmt::Display for EmbeddingFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "tree {} piece {} ({}): candidate sets {:?}",
            self.tree, self.piece, self.case, self.candidate_sizes
        )
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("instance too large: {what} has size {size}, limit is {limit}")]
    Size {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("{what} failed after {attempts} attempts: {detail}")]
    ProbabilisticFailure {
        what: &'static str,
        attempts: usize,
        detail: String,
    },

    #[error("regularity violated: {0}")]
    RegularityViolation(String),

    #[error("only {achievable} large matchings available, {requested} requested")]
    Structural { requested: usize, achievable: usize },

    #[error("embedding failed: {0}")]
    Embedding(EmbeddingFailure),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal invariant broken: {0}")]
    Internal(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
