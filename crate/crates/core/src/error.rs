use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("dangling node id {id} (graph has {num_nodes} nodes)")]
    DanglingNode { id: usize, num_nodes: usize },

    #[error("empty subgraph: edge type {edge_type} has no edges")]
    EmptySubgraph { edge_type: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid configuration: {}", .0.join("; "))]
    Config(Vec<String>),

    #[error("numeric fault in {op}: non-finite value")]
    NumericFault { op: &'static str },

    #[error("numeric fault at epoch {epoch}: {source}")]
    TrainingFault {
        epoch: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("graph too small to mask: {n} nodes at ratio {ratio}")]
    GraphTooSmall { n: usize, ratio: f64 },

    #[error("no positive samples; adjust cascade config")]
    NoPositiveSamples,

    #[error("class {label} has {count} pairs, need at least {min}")]
    ClassTooSmall { label: u8, count: usize, min: usize },

    #[error("missing {what} row for node {node}")]
    MissingRow { what: &'static str, node: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error("checkpoint not found: {}", .0.display())]
    CheckpointNotFound(PathBuf),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }
}
