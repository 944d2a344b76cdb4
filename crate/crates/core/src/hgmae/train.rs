use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::HeteroGraph;
use crate::hgmae::mask::{sample_mask, MaskPlan};
use crate::hgmae::model::{BoundParams, ModelParams};
use crate::hgmae::TrainConfig;
use crate::nn::gat::{neighbor_lists, NeighborLists};
use crate::nn::{AdamState, Tape, Var};
use crate::tensor::Matrix;

const INIT_STREAM: u64 = 1;
const MASK_STREAM: u64 = 2;

/// Features and neighbor lists of one graph the loss is computed on.
#[derive(Debug, Clone)]
pub struct View {
    /// `None` for the full graph, the edge type for a subgraph.
    pub edge_type: Option<usize>,
    pub features: Matrix,
    pub neighbors: NeighborLists,
}

/// The full graph plus every non-empty single-type subgraph.
#[derive(Debug, Clone)]
pub struct PretrainData {
    pub full: View,
    pub subgraphs: Vec<View>,
    /// Edge types without edges; they contribute no loss term.
    pub skipped_types: Vec<usize>,
}

impl PretrainData {
    pub fn new(g: &HeteroGraph) -> Result<Self> {
        let full = View {
            edge_type: None,
            features: g.features().clone(),
            neighbors: neighbor_lists(&g.union_adjacency()),
        };
        let mut subgraphs = Vec::new();
        let mut skipped_types = Vec::new();
        for k in 0..g.num_edge_types() {
            match g.extract_subgraph(k) {
                Ok(sub) => subgraphs.push(View {
                    edge_type: Some(k),
                    neighbors: neighbor_lists(&sub.adjacency()),
                    features: sub.features,
                }),
                Err(Error::EmptySubgraph { .. }) => skipped_types.push(k),
                Err(e) => return Err(e),
            }
        }
        Ok(PretrainData {
            full,
            subgraphs,
            skipped_types,
        })
    }
}

/// Mask plans for one step: the full graph, then each subgraph in
/// [`PretrainData::subgraphs`] order (`None` when the subgraph is too small
/// to mask).
#[derive(Debug, Clone, PartialEq)]
pub struct StepPlans {
    pub full: MaskPlan,
    pub subgraphs: Vec<Option<MaskPlan>>,
}

impl StepPlans {
    /// Subgraphs that contribute a loss term.
    pub fn k_eff(&self) -> usize {
        self.subgraphs.iter().filter(|p| p.is_some()).count()
    }
}

pub fn sample_step_plans(data: &PretrainData, cfg: &TrainConfig, rng: &mut ChaCha8Rng) -> Result<StepPlans> {
    let full = sample_mask(data.full.features.rows(), cfg, rng)?;
    let subgraphs = data
        .subgraphs
        .iter()
        .map(|v| match sample_mask(v.features.rows(), cfg, rng) {
            Ok(p) => Ok(Some(p)),
            Err(Error::GraphTooSmall { .. }) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    Ok(StepPlans { full, subgraphs })
}

#[derive(Debug, Clone)]
pub struct StepOutput {
    pub loss_total: f64,
    pub loss_full: f64,
    /// One entry per contributing subgraph, in type order.
    pub loss_subgraphs: Vec<f64>,
    /// Aligned with [`ModelParams::tensors`].
    pub grads: Vec<Matrix>,
    /// Masked rows whose reconstruction or target had zero norm.
    pub zero_norm_rows: usize,
}

impl StepOutput {
    pub fn loss_sub_mean(&self) -> f64 {
        if self.loss_subgraphs.is_empty() {
            0.0
        } else {
            self.loss_subgraphs.iter().sum::<f64>() / self.loss_subgraphs.len() as f64
        }
    }
}

fn encode(tape: &mut Tape, params: &ModelParams, bound: &BoundParams, x: Var, nbrs: &NeighborLists) -> Result<Var> {
    let mut h = x;
    for (layer, vars) in params.encoder.iter().zip(&bound.encoder) {
        h = layer.forward(tape, vars, h, nbrs)?;
    }
    Ok(h)
}

fn decode(tape: &mut Tape, params: &ModelParams, bound: &BoundParams, h: Var, nbrs: &NeighborLists) -> Result<Var> {
    let mut z = h;
    for (layer, vars) in params.decoder.iter().zip(&bound.decoder) {
        z = layer.forward(tape, vars, z, nbrs)?;
    }
    Ok(z)
}

/// Mask, encode, re-mask the latent rows, decode, and score the masked rows.
fn reconstruction_loss(
    tape: &mut Tape,
    params: &ModelParams,
    bound: &BoundParams,
    view: &View,
    plan: &MaskPlan,
    gamma: f64,
) -> Result<Var> {
    let base = tape.leaf(plan.substitute_random_rows(&view.features));
    let x = tape.replace_rows(base, bound.mask_token, &plan.token_rows())?;
    let h = encode(tape, params, bound, x, &view.neighbors)?;
    let h = tape.replace_rows(h, bound.remask_token, &plan.masked_ids)?;
    let z = decode(tape, params, bound, h, &view.neighbors)?;
    tape.sce(&view.features, z, &plan.masked_ids, gamma)
}

/// One loss/gradient evaluation with the given mask plans.
pub fn hgmae_step_with_plans(
    data: &PretrainData,
    params: &ModelParams,
    cfg: &TrainConfig,
    plans: &StepPlans,
) -> Result<StepOutput> {
    if plans.subgraphs.len() != data.subgraphs.len() {
        return Err(Error::Shape(format!(
            "{} subgraph plans for {} subgraphs",
            plans.subgraphs.len(),
            data.subgraphs.len()
        )));
    }
    let mut tape = Tape::new();
    let bound = params.bind(&mut tape);
    let full = reconstruction_loss(&mut tape, params, &bound, &data.full, &plans.full, cfg.gamma)?;

    let mut sub_vars = Vec::new();
    for (view, plan) in data.subgraphs.iter().zip(&plans.subgraphs) {
        if let Some(plan) = plan {
            sub_vars.push(reconstruction_loss(&mut tape, params, &bound, view, plan, cfg.gamma)?);
        }
    }
    let mut terms = vec![(full, 1.0)];
    if !sub_vars.is_empty() {
        let w = cfg.eta / sub_vars.len() as f64;
        terms.extend(sub_vars.iter().map(|&v| (v, w)));
    }
    let total = tape.weighted_sum(&terms)?;
    let grads = tape.backward(total)?;
    Ok(StepOutput {
        loss_total: tape.scalar(total),
        loss_full: tape.scalar(full),
        loss_subgraphs: sub_vars.iter().map(|&v| tape.scalar(v)).collect(),
        grads: bound
            .all()
            .into_iter()
            .zip(params.tensors())
            .map(|(v, t)| grads.get_or_zeros(v, t))
            .collect(),
        zero_norm_rows: tape.zero_norm_rows(),
    })
}

/// Samples fresh plans from `rng` and evaluates one step.
pub fn hgmae_step(
    data: &PretrainData,
    params: &ModelParams,
    cfg: &TrainConfig,
    rng: &mut ChaCha8Rng,
) -> Result<StepOutput> {
    let plans = sample_step_plans(data, cfg, rng)?;
    hgmae_step_with_plans(data, params, cfg, &plans)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochLog {
    /// 1-based.
    pub epoch: usize,
    pub loss_total: f64,
    pub loss_full: f64,
    pub loss_sub_mean: f64,
}

#[derive(Debug, Clone)]
pub struct PretrainOutput {
    pub params: ModelParams,
    pub history: Vec<EpochLog>,
    /// Edge types that had no edges and were left out of every step.
    pub skipped_types: Vec<usize>,
    pub zero_norm_rows: usize,
}

/// Full-batch Adam over [`hgmae_step`] for `cfg.epochs` epochs, with fresh
/// mask plans every epoch. Logged losses are those of the step before its
/// update.
pub fn pretrain(g: &HeteroGraph, cfg: &TrainConfig) -> Result<PretrainOutput> {
    cfg.validate()?;
    let data = PretrainData::new(g)?;
    let mut init_rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    init_rng.set_stream(INIT_STREAM);
    let mut params = ModelParams::init(g.feature_dim(), cfg, &mut init_rng);
    let mut mask_rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    mask_rng.set_stream(MASK_STREAM);

    let mut adam = AdamState::new(cfg.lr, params.tensors());
    let mut history = Vec::with_capacity(cfg.epochs);
    let mut zero_norm_rows = 0;
    for epoch in 1..=cfg.epochs {
        let fault = |e: Error| Error::TrainingFault {
            epoch,
            source: Box::new(e),
        };
        let step = hgmae_step(&data, &params, cfg, &mut mask_rng).map_err(fault)?;
        zero_norm_rows += step.zero_norm_rows;
        history.push(EpochLog {
            epoch,
            loss_total: step.loss_total,
            loss_full: step.loss_full,
            loss_sub_mean: step.loss_sub_mean(),
        });
        adam.step(&mut params.tensors_mut(), &step.grads).map_err(fault)?;
        if !params.tensors().iter().all(|t| t.is_finite()) {
            return Err(fault(Error::NumericFault { op: "adam update" }));
        }
    }
    Ok(PretrainOutput {
        params,
        history,
        skipped_types: data.skipped_types,
        zero_norm_rows,
    })
}

/// Node embeddings: the encoder on the full graph with uncorrupted features.
pub fn infer_embeddings(g: &HeteroGraph, params: &ModelParams) -> Result<Matrix> {
    if g.feature_dim() != params.d_in() {
        return Err(Error::Shape(format!(
            "graph has {} features, model expects {}",
            g.feature_dim(),
            params.d_in()
        )));
    }
    let mut tape = Tape::new();
    let bound = params.bind(&mut tape);
    let nbrs = neighbor_lists(&g.union_adjacency());
    let x = tape.leaf(g.features().clone());
    let h = encode(&mut tape, params, &bound, x, &nbrs)?;
    Ok(tape.value(h).clone())
}
