use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("line {line}: unknown node id `{id}`")]
    UnknownNode { line: usize, id: String },

    #[error("line {line}: node `{id}` assigned to more than one community")]
    DuplicateAssignment { line: usize, id: String },

    #[error("ground truth is missing {} node(s): {}", .0.len(), .0.join(", "))]
    MissingNodes(Vec<String>),

    #[error("({i}, {j}) is not an edge; tsi is only defined on edges")]
    NotAnEdge { i: usize, j: usize },

    #[error("beta must lie in (0, 1], got {0}")]
    InvalidBeta(f64),

    #[error("max_iter must be at least 1")]
    InvalidMaxIter,

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("partition covers {found} nodes, graph has {expected}")]
    PartitionMismatch { expected: usize, found: usize },

    #[error("modularity is undefined on a graph without edges")]
    NoEdges,

    #[error("experiment needs at least one seed")]
    NoSeeds,

    #[error("mu sweep requires a generator input")]
    SweepNeedsGenerator,

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors caused by an out-of-range parameter rather than bad input data.
    pub fn is_parameter_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidBeta(_)
                | Error::InvalidMaxIter
                | Error::InvalidSpec(_)
                | Error::NoSeeds
                | Error::SweepNeedsGenerator
        )
    }
}
