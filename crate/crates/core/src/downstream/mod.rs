//! Stage-2 risk propagation classifier over fused task and embedding
//! features.

mod fusion;
pub mod logistic;
pub mod metrics;

use std::fmt;
use std::str::FromStr;

pub use fusion::{build_fusion, fusion_matrix};
pub use logistic::{LogisticConfig, LogisticModel, Standardizer};
pub use metrics::{accuracy, auc, evaluate_scores, micro_f1, Metrics};

use crate::error::{Error, Result};
use crate::io::NodeTable;
use crate::pairs::{PairDatasetSplit, PropagationPair};
use crate::tensor::Matrix;

/// Which features the classifier sees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    /// Task features only.
    TaskOnly,
    /// Task features plus embeddings pre-trained with the subgraph terms.
    Hgmae,
    /// Task features plus embeddings pre-trained with `η = 0`.
    Ablation,
}

impl Condition {
    pub const ALL: [Condition; 3] = [Condition::TaskOnly, Condition::Hgmae, Condition::Ablation];

    pub fn name(self) -> &'static str {
        match self {
            Condition::TaskOnly => "task_only",
            Condition::Hgmae => "hgmae",
            Condition::Ablation => "eta0",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Condition {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Condition::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown condition {s:?} (expected task_only, hgmae or eta0)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassifierKind {
    Logistic,
}

impl FromStr for ClassifierKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "logistic" => Ok(ClassifierKind::Logistic),
            other => Err(format!("unsupported classifier kind {other:?} (available: logistic)")),
        }
    }
}

/// Anything that maps fused pair vectors to black-class probabilities.
pub trait PairClassifier {
    fn predict_proba(&self, x: &Matrix) -> Vec<f64>;
}

impl PairClassifier for LogisticModel {
    fn predict_proba(&self, x: &Matrix) -> Vec<f64> {
        LogisticModel::predict_proba(self, x)
    }
}

pub fn train_classifier(
    train: &[PropagationPair],
    task: &NodeTable,
    embeddings: Option<&NodeTable>,
    cfg: &LogisticConfig,
) -> Result<LogisticModel> {
    let (x, y) = fusion_matrix(train, task, embeddings)?;
    if !y.contains(&0) || !y.contains(&1) {
        return Err(Error::Config(vec!["training split must contain both classes".into()]));
    }
    LogisticModel::fit(&x, &y, cfg)
}

pub fn evaluate(
    model: &impl PairClassifier,
    test: &[PropagationPair],
    task: &NodeTable,
    embeddings: Option<&NodeTable>,
) -> Result<Metrics> {
    let (x, y) = fusion_matrix(test, task, embeddings)?;
    Ok(evaluate_scores(&y, &model.predict_proba(&x)))
}

/// Train on the split's train half, score its test half.
pub fn train_and_evaluate(
    split: &PairDatasetSplit,
    task: &NodeTable,
    embeddings: Option<&NodeTable>,
    cfg: &LogisticConfig,
) -> Result<Metrics> {
    let model = train_classifier(&split.train, task, embeddings, cfg)?;
    evaluate(&model, &split.test, task, embeddings)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn condition_names_round_trip() {
        for c in Condition::ALL {
            assert_eq!(c.name().parse::<Condition>().unwrap(), c);
        }
        assert!("xgboost".parse::<ClassifierKind>().is_err());
    }
}
