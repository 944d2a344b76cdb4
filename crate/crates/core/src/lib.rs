//! Heterogeneous-graph masked autoencoder pre-training and default-risk
//! propagation prediction between bond issuers.
//!
//! Pipeline: [`synth`] builds an enterprise graph with a planted default
//! cascade, [`hgmae`] pre-trains a GAT autoencoder on it by masked feature
//! reconstruction over the full graph and each edge-type subgraph, [`pairs`]
//! turns the cascade into labeled issuer pairs, and [`downstream`] classifies
//! those pairs from task features fused with the learned embeddings.

pub mod downstream;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod hgmae;
pub mod io;
pub mod nn;
pub mod pairs;
pub mod synth;
pub mod tensor;

pub use downstream::{Condition, Metrics};
pub use error::{Error, Result};
pub use experiment::{run_conditions, ComparisonTable, ExperimentConfig};
pub use graph::{Adjacency, HeteroGraph, Subgraph};
pub use hgmae::{ModelParams, TrainConfig};
pub use io::NodeTable;
pub use pairs::{PairDatasetSplit, PropagationPair};
pub use synth::{DefaultEvent, GenConfig};
pub use tensor::Matrix;
