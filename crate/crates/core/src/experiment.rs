//! End-to-end experiment: generate, pre-train (with and without the subgraph
//! terms), build pairs, classify under three feature conditions, repeat per
//! seed.

use std::fmt::Write as _;
use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::downstream::{train_and_evaluate, ClassifierKind, Condition, LogisticConfig, Metrics};
use crate::error::{Error, Result};
use crate::graph::HeteroGraph;
use crate::hgmae::{infer_embeddings, pretrain, TrainConfig};
use crate::io::{fmt_f64, NodeTable};
use crate::pairs::{build_pairs, split, PairDatasetSplit, DEFAULT_HOPS};
use crate::synth::{self, DefaultEvent, GenConfig};

const PAIRS_STREAM: u64 = 11;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub gen: GenConfig,
    pub pretrain: TrainConfig,
    /// Expansion rounds `N` for pair construction.
    pub hops: usize,
    pub train_frac: f64,
    pub classifier_kind: ClassifierKind,
    pub classifier: LogisticConfig,
    pub seeds: Vec<u64>,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            gen: GenConfig::default(),
            pretrain: TrainConfig::default(),
            hops: DEFAULT_HOPS,
            train_frac: 0.8,
            classifier_kind: ClassifierKind::Logistic,
            classifier: LogisticConfig::default(),
            seeds: vec![1, 2, 3, 4, 5],
            output_dir: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    /// Validates every section and reports all problems at once.
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        for r in [self.gen.validate(), self.pretrain.validate()] {
            if let Err(Error::Config(e)) = r {
                errs.extend(e);
            }
        }
        if self.hops == 0 {
            errs.push("pairs.N must be >= 1".into());
        }
        if !(self.train_frac > 0.0 && self.train_frac < 1.0) {
            errs.push(format!("pairs.train_frac must be in (0, 1) (got {})", self.train_frac));
        }
        if !(self.classifier.lr > 0.0 && self.classifier.lr.is_finite()) {
            errs.push(format!("classifier.lr must be > 0 (got {})", self.classifier.lr));
        }
        if !(self.classifier.l2 >= 0.0 && self.classifier.l2.is_finite()) {
            errs.push(format!("classifier.l2 must be >= 0 (got {})", self.classifier.l2));
        }
        if self.seeds.is_empty() {
            errs.push("seeds must list at least one seed".into());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(errs))
        }
    }

    /// Parses flat `section.key=value` lines over the defaults. Unknown keys
    /// and unparsable values are collected and reported together.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        let mut errs = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                errs.push(format!("line {}: not a key=value line: {line:?}", no + 1));
                continue;
            };
            if let Err(e) = cfg.set(key.trim(), value.trim()) {
                errs.push(format!("line {}: {e}", no + 1));
            }
        }
        if !errs.is_empty() {
            return Err(Error::Config(errs));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> std::result::Result<T, String> {
            v.parse().map_err(|_| format!("{key}: cannot parse {v:?}"))
        }
        if let Some(k) = key.strip_prefix("gen.") {
            return synth::set_config_field(&mut self.gen, k, value);
        }
        if let Some(k) = key.strip_prefix("pretrain.") {
            return self.pretrain.set_field(k, value);
        }
        match key {
            "pairs.N" => self.hops = num(key, value)?,
            "pairs.train_frac" => self.train_frac = num(key, value)?,
            "classifier.kind" => self.classifier_kind = value.parse()?,
            "classifier.l2" => self.classifier.l2 = num(key, value)?,
            "classifier.iterations" => self.classifier.iterations = num(key, value)?,
            "classifier.lr" => self.classifier.lr = num(key, value)?,
            "seeds" => {
                self.seeds = value
                    .split(',')
                    .map(|s| num(key, s.trim()))
                    .collect::<std::result::Result<_, _>>()?
            }
            "output_dir" => self.output_dir = PathBuf::from(value),
            _ => return Err(format!("unknown key {key}")),
        }
        Ok(())
    }

    /// Generator config for one pipeline seed.
    pub fn gen_for_seed(&self, seed: u64) -> GenConfig {
        GenConfig {
            rng_seed: seed,
            ..self.gen.clone()
        }
    }

    /// Pre-training config for one pipeline seed; the ablation differs only
    /// in `η = 0`.
    pub fn pretrain_for_seed(&self, seed: u64, condition: Condition) -> TrainConfig {
        TrainConfig {
            rng_seed: seed,
            eta: if condition == Condition::Ablation {
                0.0
            } else {
                self.pretrain.eta
            },
            ..self.pretrain.clone()
        }
    }

    /// RNG for white-pair balancing followed by the train/test split.
    pub fn pairs_rng(&self, seed: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(PAIRS_STREAM);
        rng
    }
}

/// All stage outputs for one pipeline seed.
#[derive(Debug, Clone)]
pub struct SeedRun {
    pub seed: u64,
    pub graph: HeteroGraph,
    pub events: Vec<DefaultEvent>,
    pub task_features: NodeTable,
    pub split: PairDatasetSplit,
    pub embeddings_hgmae: NodeTable,
    pub embeddings_ablation: NodeTable,
    pub metrics: Vec<(Condition, Metrics)>,
}

pub fn run_seed(cfg: &ExperimentConfig, seed: u64) -> Result<SeedRun> {
    let gen = cfg.gen_for_seed(seed);
    let graph = synth::generate_graph(&gen)?;
    let events = synth::simulate_cascade(&graph, &gen)?;
    let task_features = synth::attach_task_features(&graph, &gen)?;

    let embed = |condition| -> Result<NodeTable> {
        let out = pretrain(&graph, &cfg.pretrain_for_seed(seed, condition))?;
        Ok(NodeTable::dense(infer_embeddings(&graph, &out.params)?))
    };
    let embeddings_hgmae = embed(Condition::Hgmae)?;
    let embeddings_ablation = embed(Condition::Ablation)?;

    let mut rng = cfg.pairs_rng(seed);
    let pairs = build_pairs(&graph, &events, cfg.hops, &mut rng)?;
    let split = split(&pairs, cfg.train_frac, &mut rng)?;

    let mut metrics = Vec::with_capacity(3);
    for condition in Condition::ALL {
        let emb = match condition {
            Condition::TaskOnly => None,
            Condition::Hgmae => Some(&embeddings_hgmae),
            Condition::Ablation => Some(&embeddings_ablation),
        };
        metrics.push((condition, train_and_evaluate(&split, &task_features, emb, &cfg.classifier)?));
    }
    Ok(SeedRun {
        seed,
        graph,
        events,
        task_features,
        split,
        embeddings_hgmae,
        embeddings_ablation,
        metrics,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResultRow {
    pub condition: Condition,
    pub seed: u64,
    pub metrics: Metrics,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionSummary {
    pub condition: Condition,
    pub runs: usize,
    pub mean_micro_f1: f64,
    pub std_micro_f1: f64,
    pub mean_auc: f64,
}

/// Per-seed rows ordered by condition, then seed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ComparisonTable {
    pub rows: Vec<ResultRow>,
}

impl ComparisonTable {
    pub fn from_rows(mut rows: Vec<ResultRow>) -> Self {
        rows.sort_by_key(|r| (r.condition, r.seed));
        ComparisonTable { rows }
    }

    pub fn micro_f1(&self, condition: Condition, seed: u64) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.condition == condition && r.seed == seed)
            .map(|r| r.metrics.micro_f1)
    }

    /// Mean and sample standard deviation of Micro-F1 per condition.
    pub fn summary(&self) -> Vec<ConditionSummary> {
        Condition::ALL
            .into_iter()
            .filter_map(|condition| {
                let rows: Vec<&ResultRow> = self.rows.iter().filter(|r| r.condition == condition).collect();
                if rows.is_empty() {
                    return None;
                }
                let n = rows.len() as f64;
                let mean = rows.iter().map(|r| r.metrics.micro_f1).sum::<f64>() / n;
                let var = if rows.len() > 1 {
                    rows.iter().map(|r| (r.metrics.micro_f1 - mean).powi(2)).sum::<f64>() / (n - 1.0)
                } else {
                    0.0
                };
                Some(ConditionSummary {
                    condition,
                    runs: rows.len(),
                    mean_micro_f1: mean,
                    std_micro_f1: var.sqrt(),
                    mean_auc: rows.iter().map(|r| r.metrics.auc).sum::<f64>() / n,
                })
            })
            .collect()
    }

    /// `results.tsv`: one row per (condition, seed), then a `#`-prefixed
    /// summary block.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("condition\tseed\tmicro_f1\taccuracy\tauc\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                r.condition,
                r.seed,
                fmt_f64(r.metrics.micro_f1),
                fmt_f64(r.metrics.accuracy),
                fmt_f64(r.metrics.auc)
            );
        }
        out.push_str("# summary\n# condition\truns\tmean_micro_f1\tstd_micro_f1\tmean_auc\n");
        for s in self.summary() {
            let _ = writeln!(
                out,
                "# {}\t{}\t{}\t{}\t{}",
                s.condition,
                s.runs,
                fmt_f64(s.mean_micro_f1),
                fmt_f64(s.std_micro_f1),
                fmt_f64(s.mean_auc)
            );
        }
        out
    }

    pub fn human_summary(&self) -> String {
        let mut out = String::from("condition    runs  micro-F1 (mean ± std)  AUC (mean)\n");
        for s in self.summary() {
            let _ = writeln!(
                out,
                "{:<12} {:>4}  {:.4} ± {:.4}        {:.4}",
                s.condition.name(),
                s.runs,
                s.mean_micro_f1,
                s.std_micro_f1,
                s.mean_auc
            );
        }
        out
    }
}

/// Runs every configured seed and collects the three-condition table.
pub fn run_conditions(cfg: &ExperimentConfig) -> Result<ComparisonTable> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for &seed in &cfg.seeds {
        let run = run_seed(cfg, seed)?;
        rows.extend(run.metrics.into_iter().map(|(condition, metrics)| ResultRow {
            condition,
            seed,
            metrics,
        }));
    }
    Ok(ComparisonTable::from_rows(rows))
}
