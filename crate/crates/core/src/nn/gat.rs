//! Graph attention layers on the tape.

use std::rc::Rc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Adjacency;
use crate::nn::tape::{Tape, Var};
use crate::tensor::Matrix;

pub const DEFAULT_LEAKY_SLOPE: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeadMerge {
    Concat,
    Mean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Elu,
    Identity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GatHead {
    /// `[d_out_head × d_in]`
    pub weight: Matrix,
    /// `[1 × 2·d_out_head]`, source half first.
    pub attn: Matrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GatLayerParams {
    pub heads: Vec<GatHead>,
    pub leaky_slope: f64,
    pub merge: HeadMerge,
    pub activation: Activation,
}

/// Neighbor lists with self-loops, shared by every layer run over the same
/// graph.
pub type NeighborLists = Rc<Vec<Vec<usize>>>;

pub fn neighbor_lists(adj: &Adjacency) -> NeighborLists {
    Rc::new(adj.with_self_loops())
}

fn uniform_matrix(rows: usize, cols: usize, bound: f64, rng: &mut impl Rng) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.gen_range(-bound..=bound))
}

impl GatLayerParams {
    /// Weights and attention vectors drawn from `U(-1/√fan_in, 1/√fan_in)`.
    pub fn init(
        d_in: usize,
        head_dim: usize,
        num_heads: usize,
        merge: HeadMerge,
        activation: Activation,
        rng: &mut impl Rng,
    ) -> Self {
        assert!(num_heads >= 1, "a GAT layer needs at least one head");
        let heads = (0..num_heads)
            .map(|_| GatHead {
                weight: uniform_matrix(head_dim, d_in, 1.0 / (d_in as f64).sqrt(), rng),
                attn: uniform_matrix(1, 2 * head_dim, 1.0 / ((2 * head_dim) as f64).sqrt(), rng),
            })
            .collect();
        GatLayerParams {
            heads,
            leaky_slope: DEFAULT_LEAKY_SLOPE,
            merge,
            activation,
        }
    }

    pub fn d_in(&self) -> usize {
        self.heads[0].weight.cols()
    }

    pub fn head_dim(&self) -> usize {
        self.heads[0].weight.rows()
    }

    pub fn d_out(&self) -> usize {
        match self.merge {
            HeadMerge::Concat => self.head_dim() * self.heads.len(),
            HeadMerge::Mean => self.head_dim(),
        }
    }

    /// Trainable tensors in a fixed order: per head, weight then attention.
    pub fn tensors(&self) -> impl Iterator<Item = &Matrix> {
        self.heads.iter().flat_map(|h| [&h.weight, &h.attn])
    }

    pub fn tensors_mut(&mut self) -> impl Iterator<Item = &mut Matrix> {
        self.heads.iter_mut().flat_map(|h| [&mut h.weight, &mut h.attn])
    }

    pub fn num_tensors(&self) -> usize {
        2 * self.heads.len()
    }

    /// Places this layer's tensors on the tape, in [`Self::tensors`] order.
    pub fn bind(&self, tape: &mut Tape) -> Vec<Var> {
        self.tensors().map(|t| tape.leaf(t.clone())).collect()
    }

    /// Forward pass; `vars` are this layer's tensors as returned by
    /// [`Self::bind`].
    pub fn forward(&self, tape: &mut Tape, vars: &[Var], x: Var, neighbors: &NeighborLists) -> Result<Var> {
        if vars.len() != self.num_tensors() {
            return Err(Error::Shape(format!(
                "{} bound tensors for a {}-head layer",
                vars.len(),
                self.heads.len()
            )));
        }
        if tape.value(x).cols() != self.d_in() {
            return Err(Error::Shape(format!(
                "layer expects {} input features, got {}",
                self.d_in(),
                tape.value(x).cols()
            )));
        }
        let mut outs = Vec::with_capacity(self.heads.len());
        for hv in vars.chunks(2) {
            let z = tape.matmul_t(x, hv[0])?;
            outs.push(tape.attention(z, hv[1], neighbors, self.leaky_slope)?);
        }
        let merged = match (self.merge, outs.len()) {
            (_, 1) => outs[0],
            (HeadMerge::Concat, _) => tape.concat_cols(&outs)?,
            (HeadMerge::Mean, _) => tape.mean(&outs)?,
        };
        match self.activation {
            Activation::Elu => tape.elu(merged),
            Activation::Identity => Ok(merged),
        }
    }
}

/// Runs a stack of layers on a fresh tape; forward only.
pub fn stack_forward(layers: &[GatLayerParams], x: &Matrix, adj: &Adjacency) -> Result<Matrix> {
    let mut tape = Tape::new();
    let nbrs = neighbor_lists(adj);
    let mut h = tape.leaf(x.clone());
    for layer in layers {
        let vars = layer.bind(&mut tape);
        h = layer.forward(&mut tape, &vars, h, &nbrs)?;
    }
    Ok(tape.value(h).clone())
}
