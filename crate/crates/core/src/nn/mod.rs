//! Dense numeric kernel: reverse-mode tape, GAT layers, Adam, gradient
//! checking and checkpoints.

pub mod adam;
pub mod checkpoint;
pub mod gat;
pub mod gradcheck;
pub mod tape;

pub use adam::AdamState;
pub use checkpoint::Checkpoint;
pub use gat::{Activation, GatHead, GatLayerParams, HeadMerge, NeighborLists};
pub use gradcheck::{grad_check, GradCheckReport};
pub use tape::{sce_loss, Gradients, Tape, Var};
