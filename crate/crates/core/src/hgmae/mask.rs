//! Uniform node masking with learnable-token and random-row substitution.

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::hgmae::TrainConfig;
use crate::tensor::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskAction {
    /// Replace the row with the learnable `[MASK]` token.
    Token,
    /// Replace the row with the features of unmasked node `source`.
    Random { source: usize },
}

/// Sampled set of masked nodes with one action per masked node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskPlan {
    /// Ascending.
    pub masked_ids: Vec<usize>,
    /// Aligned with `masked_ids`.
    pub actions: Vec<MaskAction>,
}

impl MaskPlan {
    pub fn len(&self) -> usize {
        self.masked_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masked_ids.is_empty()
    }

    pub fn token_rows(&self) -> Vec<usize> {
        self.masked_ids
            .iter()
            .zip(&self.actions)
            .filter(|(_, a)| **a == MaskAction::Token)
            .map(|(&i, _)| i)
            .collect()
    }

    pub fn random_count(&self) -> usize {
        self.actions
            .iter()
            .filter(|a| matches!(a, MaskAction::Random { .. }))
            .count()
    }

    /// `x` with RANDOM rows substituted; TOKEN rows left as they are.
    pub fn substitute_random_rows(&self, x: &Matrix) -> Matrix {
        let mut out = x.clone();
        for (&i, a) in self.masked_ids.iter().zip(&self.actions) {
            if let MaskAction::Random { source } = *a {
                out.row_mut(i).copy_from_slice(x.row(source));
            }
        }
        out
    }
}

/// Number of masked nodes for `n` nodes at `ratio`; rejects plans that would
/// mask nothing or everything.
pub fn mask_count(n: usize, ratio: f64) -> Result<usize> {
    let count = (ratio * n as f64).round() as usize;
    if n < 2 || count == 0 || count >= n {
        return Err(Error::GraphTooSmall { n, ratio });
    }
    Ok(count)
}

/// Samples `round(mask_ratio·n)` nodes uniformly without replacement, then
/// `round(random_sub_rate·|masked|)` of those uniformly for RANDOM
/// substitution, each drawing its source row uniformly from the unmasked
/// nodes.
pub fn sample_mask(n: usize, cfg: &TrainConfig, rng: &mut impl Rng) -> Result<MaskPlan> {
    let count = mask_count(n, cfg.mask_ratio)?;
    let mut masked_ids = index::sample(rng, n, count).into_vec();
    masked_ids.sort_unstable();

    let n_random = (cfg.random_sub_rate * count as f64).round() as usize;
    let mut actions = vec![MaskAction::Token; count];
    if n_random > 0 {
        let mut is_masked = vec![false; n];
        for &i in &masked_ids {
            is_masked[i] = true;
        }
        let unmasked: Vec<usize> = (0..n).filter(|&i| !is_masked[i]).collect();
        let mut picks = index::sample(rng, count, n_random).into_vec();
        picks.sort_unstable();
        for p in picks {
            let source = unmasked[rng.gen_range(0..unmasked.len())];
            actions[p] = MaskAction::Random { source };
        }
    }
    Ok(MaskPlan { masked_ids, actions })
}

/// Corrupted input: TOKEN rows become `mask_token`, RANDOM rows copy their
/// source row, every other row is untouched.
pub fn apply_mask(x: &Matrix, plan: &MaskPlan, mask_token: &[f64]) -> Matrix {
    assert_eq!(mask_token.len(), x.cols(), "mask token width");
    let mut out = plan.substitute_random_rows(x);
    for i in plan.token_rows() {
        out.row_mut(i).copy_from_slice(mask_token);
    }
    out
}
