//! Masked autoencoder pre-training on a heterogeneous graph.
//!
//! One shared GAT encoder/decoder reconstructs masked node features on the
//! full graph and on every single-edge-type subgraph. The objective is
//! `L = L_full + η / K_eff · Σ_k L_k` where each term is a scaled cosine
//! error over that view's masked nodes and `K_eff` counts the subgraphs that
//! were actually used.

mod mask;
mod model;
mod train;

pub use mask::{apply_mask, mask_count, sample_mask, MaskAction, MaskPlan};
pub use model::ModelParams;
pub use train::{
    hgmae_step, hgmae_step_with_plans, infer_embeddings, pretrain, sample_step_plans, EpochLog,
    PretrainData, PretrainOutput, StepOutput, StepPlans, View,
};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub mask_ratio: f64,
    pub random_sub_rate: f64,
    /// SCE exponent γ.
    pub gamma: f64,
    /// Subgraph loss weight η.
    pub eta: f64,
    pub d_emb: usize,
    pub hidden_heads: usize,
    pub hidden_head_dim: usize,
    pub epochs: usize,
    pub lr: f64,
    pub rng_seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            mask_ratio: 0.5,
            random_sub_rate: 0.15,
            gamma: 1.0,
            eta: 1.0,
            d_emb: 32,
            hidden_heads: 4,
            hidden_head_dim: 16,
            epochs: 300,
            lr: 0.005,
            rng_seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        if !(self.mask_ratio > 0.0 && self.mask_ratio < 1.0) {
            errs.push(format!("pretrain.mask_ratio must be in (0, 1) (got {})", self.mask_ratio));
        }
        if !(0.0..=1.0).contains(&self.random_sub_rate) {
            errs.push(format!(
                "pretrain.random_sub_rate must be in [0, 1] (got {})",
                self.random_sub_rate
            ));
        }
        if !(self.gamma >= 1.0 && self.gamma.is_finite()) {
            errs.push(format!("pretrain.gamma must be >= 1 (got {})", self.gamma));
        }
        if !(self.eta >= 0.0 && self.eta.is_finite()) {
            errs.push(format!("pretrain.eta must be >= 0 (got {})", self.eta));
        }
        for (name, v) in [
            ("pretrain.d_emb", self.d_emb),
            ("pretrain.hidden_heads", self.hidden_heads),
            ("pretrain.hidden_head_dim", self.hidden_head_dim),
        ] {
            if v == 0 {
                errs.push(format!("{name} must be >= 1"));
            }
        }
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            errs.push(format!("pretrain.lr must be > 0 (got {})", self.lr));
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(errs))
        }
    }

    /// `(key, value)` pairs without the `pretrain.` prefix.
    pub fn to_pairs(&self) -> Vec<(String, String)> {
        [
            ("mask_ratio", self.mask_ratio.to_string()),
            ("random_sub_rate", self.random_sub_rate.to_string()),
            ("gamma", self.gamma.to_string()),
            ("eta", self.eta.to_string()),
            ("d_emb", self.d_emb.to_string()),
            ("hidden_heads", self.hidden_heads.to_string()),
            ("hidden_head_dim", self.hidden_head_dim.to_string()),
            ("epochs", self.epochs.to_string()),
            ("lr", self.lr.to_string()),
            ("rng_seed", self.rng_seed.to_string()),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }

    pub fn set_field(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> std::result::Result<T, String> {
            v.trim()
                .parse()
                .map_err(|_| format!("pretrain.{key}: cannot parse {v:?}"))
        }
        match key {
            "mask_ratio" => self.mask_ratio = num(key, value)?,
            "random_sub_rate" => self.random_sub_rate = num(key, value)?,
            "gamma" => self.gamma = num(key, value)?,
            "eta" => self.eta = num(key, value)?,
            "d_emb" => self.d_emb = num(key, value)?,
            "hidden_heads" => self.hidden_heads = num(key, value)?,
            "hidden_head_dim" => self.hidden_head_dim = num(key, value)?,
            "epochs" => self.epochs = num(key, value)?,
            "lr" => self.lr = num(key, value)?,
            "rng_seed" => self.rng_seed = num(key, value)?,
            _ => return Err(format!("unknown key pretrain.{key}")),
        }
        Ok(())
    }
}
