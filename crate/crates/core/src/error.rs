use std::path::PathBuf;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("node not found: {0}")]
    NodeNotFound(String),

    #[error("duplicate node: {0}")]
    DuplicateNode(String),

    #[error("duplicate edge between {0} and {1}")]
    DuplicateEdge(String, String),

    #[error("self-loop on {0} is not allowed")]
    SelfLoop(String),

    #[error("invalid edge weight {weight} between {source_node} and {target_node}")]
    InvalidWeight {
        source_node: String,
        target_node: String,
        weight: f64,
    },

    #[error("modularity undefined: graph has no edges or zero total weight")]
    ModularityUndefined,

    #[error("partition covers {found} nodes but the graph has {expected}")]
    PartitionMismatch { expected: usize, found: usize },

    #[error("partition has no community for node {0}")]
    PartialPartition(String),

    #[error("graph is empty")]
    EmptyGraph,

    #[error("vote out of range: {0} (expected 1..=10)")]
    VoteOutOfRange(i64),

    #[error("rating out of range for {item}: {value} (expected 0..=10)")]
    RatingOutOfRange { item: String, value: f64 },

    #[error("no ratings available for category {0}")]
    NoRatings(String),

    #[error("unknown category: {0}")]
    UnknownCategory(String),

    #[error("unknown {kind}: {value}")]
    UnknownValue { kind: &'static str, value: String },

    #[error("no records")]
    NoRecords,

    #[error("{path}: line {line}: {message}")]
    MalformedRow {
        path: String,
        line: u64,
        message: String,
    },

    #[error("{path}: {message}")]
    Parse { path: String, message: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_diagonal:e}, target {target:e})")]
    EigenNoConvergence {
        sweeps: usize,
        off_diagonal: f64,
        target: f64,
    },

    #[error("cannot form {k} clusters from {points} points")]
    TooManyClusters { k: usize, points: usize },

    #[error("{cell}: {source}")]
    Cell {
        cell: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the CLI: 1 for bad input, 2 for algorithm failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::EigenNoConvergence { .. }
            | Error::TooManyClusters { .. }
            | Error::ModularityUndefined
            | Error::EmptyGraph => 2,
            Error::Cell { source, .. } => source.exit_code(),
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
