use rand::Rng;

use crate::error::{Error, Result};
use crate::hgmae::TrainConfig;
use crate::nn::gat::{Activation, GatLayerParams, HeadMerge};
use crate::nn::{Checkpoint, Tape, Var};
use crate::tensor::Matrix;

/// Every trainable tensor of the autoencoder.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub encoder: Vec<GatLayerParams>,
    pub decoder: Vec<GatLayerParams>,
    /// `[1 × d_in]`, the `[MASK]` input token.
    pub mask_token: Matrix,
    /// `[1 × d_emb]`, the `[RMASK]` latent token.
    pub remask_token: Matrix,
}

/// Tape handles for one [`ModelParams`].
#[derive(Debug, Clone)]
pub(crate) struct BoundParams {
    pub encoder: Vec<Vec<Var>>,
    pub decoder: Vec<Vec<Var>>,
    pub mask_token: Var,
    pub remask_token: Var,
}

impl BoundParams {
    /// In [`ModelParams::tensors`] order.
    pub fn all(&self) -> Vec<Var> {
        let mut out: Vec<Var> = self.encoder.iter().chain(&self.decoder).flatten().copied().collect();
        out.push(self.mask_token);
        out.push(self.remask_token);
        out
    }
}

impl ModelParams {
    /// Encoder: `hidden_heads × hidden_head_dim` concat with ELU, then one
    /// head to `d_emb`. Decoder: one head back to `d_in`. Weights uniform in
    /// `±1/√fan_in`, tokens zero.
    pub fn init(d_in: usize, cfg: &TrainConfig, rng: &mut impl Rng) -> Self {
        let hidden = GatLayerParams::init(
            d_in,
            cfg.hidden_head_dim,
            cfg.hidden_heads,
            HeadMerge::Concat,
            Activation::Elu,
            rng,
        );
        let out = GatLayerParams::init(
            hidden.d_out(),
            cfg.d_emb,
            1,
            HeadMerge::Concat,
            Activation::Identity,
            rng,
        );
        let decoder = GatLayerParams::init(cfg.d_emb, d_in, 1, HeadMerge::Concat, Activation::Identity, rng);
        ModelParams {
            encoder: vec![hidden, out],
            decoder: vec![decoder],
            mask_token: Matrix::zeros(1, d_in),
            remask_token: Matrix::zeros(1, cfg.d_emb),
        }
    }

    pub fn d_in(&self) -> usize {
        self.mask_token.cols()
    }

    pub fn d_emb(&self) -> usize {
        self.remask_token.cols()
    }

    pub fn tensor_names(&self) -> Vec<String> {
        let mut names = Vec::new();
        for (part, layers) in [("encoder", &self.encoder), ("decoder", &self.decoder)] {
            for (l, layer) in layers.iter().enumerate() {
                for h in 0..layer.heads.len() {
                    names.push(format!("{part}.{l}.head{h}.weight"));
                    names.push(format!("{part}.{l}.head{h}.attn"));
                }
            }
        }
        names.push("mask_token".into());
        names.push("remask_token".into());
        names
    }

    pub fn tensors(&self) -> Vec<&Matrix> {
        let mut out: Vec<&Matrix> = self
            .encoder
            .iter()
            .chain(&self.decoder)
            .flat_map(|l| l.tensors())
            .collect();
        out.push(&self.mask_token);
        out.push(&self.remask_token);
        out
    }

    pub fn tensors_mut(&mut self) -> Vec<&mut Matrix> {
        let mut out: Vec<&mut Matrix> = self
            .encoder
            .iter_mut()
            .chain(self.decoder.iter_mut())
            .flat_map(|l| l.tensors_mut())
            .collect();
        out.push(&mut self.mask_token);
        out.push(&mut self.remask_token);
        out
    }

    pub fn num_scalars(&self) -> usize {
        self.tensors().iter().map(|t| t.len()).sum()
    }

    pub fn flatten(&self) -> Vec<f64> {
        self.tensors().iter().flat_map(|t| t.as_slice().iter().copied()).collect()
    }

    /// Overwrites every tensor from a vector laid out as [`Self::flatten`].
    pub fn assign_flat(&mut self, flat: &[f64]) {
        assert_eq!(flat.len(), self.num_scalars(), "flat parameter length");
        let mut off = 0;
        for t in self.tensors_mut() {
            let n = t.len();
            t.as_mut_slice().copy_from_slice(&flat[off..off + n]);
            off += n;
        }
    }

    pub(crate) fn bind(&self, tape: &mut Tape) -> BoundParams {
        BoundParams {
            encoder: self.encoder.iter().map(|l| l.bind(tape)).collect(),
            decoder: self.decoder.iter().map(|l| l.bind(tape)).collect(),
            mask_token: tape.leaf(self.mask_token.clone()),
            remask_token: tape.leaf(self.remask_token.clone()),
        }
    }

    pub fn to_checkpoint(&self, cfg: &TrainConfig) -> Checkpoint {
        let mut config: Vec<(String, String)> = vec![("model.d_in".into(), self.d_in().to_string())];
        config.extend(cfg.to_pairs().into_iter().map(|(k, v)| (format!("pretrain.{k}"), v)));
        Checkpoint {
            config,
            tensors: self
                .tensor_names()
                .into_iter()
                .zip(self.tensors().into_iter().cloned())
                .collect(),
        }
    }

    /// Rebuilds parameters from a checkpoint, checking every tensor name and
    /// shape against the architecture implied by `cfg`.
    pub fn from_checkpoint(ck: &Checkpoint, cfg: &TrainConfig) -> Result<Self> {
        let d_in: usize = ck
            .config_value("model.d_in")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Checkpoint("missing model.d_in".into()))?;
        let mut rng = rand::rngs::mock::StepRng::new(0, 0);
        let mut params = ModelParams::init(d_in, cfg, &mut rng);
        let names = params.tensor_names();
        if ck.tensors.len() != names.len() {
            return Err(Error::Checkpoint(format!(
                "{} tensors in checkpoint, config implies {}",
                ck.tensors.len(),
                names.len()
            )));
        }
        for ((name, slot), (ck_name, value)) in names.iter().zip(params.tensors_mut()).zip(&ck.tensors) {
            if name != ck_name {
                return Err(Error::Checkpoint(format!("expected tensor {name}, found {ck_name}")));
            }
            if slot.shape() != value.shape() {
                return Err(Error::Checkpoint(format!(
                    "tensor {name}: checkpoint shape {:?}, config implies {:?}",
                    value.shape(),
                    slot.shape()
                )));
            }
            *slot = value.clone();
        }
        Ok(params)
    }
}
