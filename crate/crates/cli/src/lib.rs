//! Pipeline stages behind the `hgrisk` binary.
//!
//! Every stage reads and writes files under one seed directory:
//!
//! ```text
//! <out>/seed_<s>/
//!   gen.config nodes.tsv edges.tsv events.tsv task_features.tsv pairs.tsv
//!   hgmae/  checkpoint.ckpt pretrain_log.tsv embeddings.tsv model.tsv metrics.tsv
//!   eta0/   (same as hgmae/)
//!   task_only/ model.tsv metrics.tsv
//! <out>/results.tsv
//! <out>/summary.txt
//! ```
//!
//! `run_all` is literally the per-seed composition of the individual
//! stages, followed by [`collect_results`].

use std::fs;
use std::path::{Path, PathBuf};
use std::thread;

use anyhow::{bail, Context, Result};
use hgrisk_core::downstream::{evaluate, train_classifier};
use hgrisk_core::experiment::ResultRow;
use hgrisk_core::hgmae::{infer_embeddings, pretrain};
use hgrisk_core::io::{self, NodeTable};
use hgrisk_core::nn::Checkpoint;
use hgrisk_core::pairs::{build_pairs, split};
use hgrisk_core::{synth, ComparisonTable, Condition, ExperimentConfig, HeteroGraph, ModelParams};

pub const RESULTS_FILE: &str = "results.tsv";
pub const SUMMARY_FILE: &str = "summary.txt";
pub const GEN_CONFIG_FILE: &str = "gen.config";
pub const CHECKPOINT_FILE: &str = "checkpoint.ckpt";
pub const PRETRAIN_LOG_FILE: &str = "pretrain_log.tsv";
pub const MODEL_FILE: &str = "model.tsv";
pub const METRICS_FILE: &str = "metrics.tsv";

/// Reads a config file, or the built-in defaults when `path` is `None`.
pub fn load_config(path: Option<&Path>) -> Result<ExperimentConfig> {
    let Some(path) = path else {
        return Ok(ExperimentConfig::default());
    };
    let text = fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
    ExperimentConfig::parse(&text).with_context(|| format!("in config {}", path.display()))
}

/// Artifact locations for one seed.
#[derive(Debug, Clone)]
pub struct SeedDir {
    pub seed: u64,
    pub root: PathBuf,
}

impl SeedDir {
    pub fn new(out: &Path, seed: u64) -> Self {
        SeedDir {
            seed,
            root: out.join(format!("seed_{seed}")),
        }
    }

    pub fn file(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    /// Per-condition subdirectory; pre-training variants share the
    /// condition names `hgmae` and `eta0`.
    pub fn condition_file(&self, condition: Condition, name: &str) -> PathBuf {
        self.root.join(condition.name()).join(name)
    }
}

/// Fails with the expected path when an upstream artifact is missing.
fn require(path: &Path, producer: &str) -> Result<()> {
    if !path.is_file() {
        bail!("missing artifact: {} (produced by `hgrisk {producer}`)", path.display());
    }
    Ok(())
}

fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    Ok(())
}

fn load_graph(dir: &SeedDir) -> Result<HeteroGraph> {
    require(&dir.file(io::NODES_FILE), "generate")?;
    require(&dir.file(io::EDGES_FILE), "generate")?;
    Ok(io::load_graph(&dir.root)?)
}

fn load_embeddings(dir: &SeedDir, condition: Condition) -> Result<Option<NodeTable>> {
    if condition == Condition::TaskOnly {
        return Ok(None);
    }
    let path = dir.condition_file(condition, io::EMBEDDINGS_FILE);
    require(&path, &format!("embed --variant {condition}"))?;
    Ok(Some(io::load_node_table(&path, "e")?))
}

fn check_variant(condition: Condition) -> Result<()> {
    if condition == Condition::TaskOnly {
        bail!("task_only has no pre-trained model; use --variant hgmae or eta0");
    }
    Ok(())
}

pub fn cmd_generate(cfg: &ExperimentConfig, dir: &SeedDir) -> Result<()> {
    let gen = cfg.gen_for_seed(dir.seed);
    let graph = synth::generate_graph(&gen)?;
    let events = synth::simulate_cascade(&graph, &gen)?;
    let task = synth::attach_task_features(&graph, &gen)?;
    fs::create_dir_all(&dir.root).with_context(|| format!("cannot create {}", dir.root.display()))?;
    io::save_graph(&graph, &dir.root)?;
    io::save_events(&events, &dir.file(io::EVENTS_FILE))?;
    io::save_node_table(&task, "t", &dir.file(io::TASK_FEATURES_FILE))?;
    io::write_atomic(&dir.file(GEN_CONFIG_FILE), &synth::format_config(&gen))?;
    Ok(())
}

/// Returns the first and last total loss.
pub fn cmd_pretrain(cfg: &ExperimentConfig, dir: &SeedDir, variant: Condition) -> Result<(f64, f64)> {
    check_variant(variant)?;
    let graph = load_graph(dir)?;
    let train_cfg = cfg.pretrain_for_seed(dir.seed, variant);
    let out = pretrain(&graph, &train_cfg)?;
    let ck = dir.condition_file(variant, CHECKPOINT_FILE);
    ensure_parent(&ck)?;
    out.params.to_checkpoint(&train_cfg).save(&ck)?;
    io::save_pretrain_log(&out.history, &dir.condition_file(variant, PRETRAIN_LOG_FILE))?;
    let first = out.history.first().map_or(f64::NAN, |e| e.loss_total);
    let last = out.history.last().map_or(f64::NAN, |e| e.loss_total);
    Ok((first, last))
}

pub fn cmd_embed(cfg: &ExperimentConfig, dir: &SeedDir, variant: Condition) -> Result<()> {
    check_variant(variant)?;
    let ck = Checkpoint::load(&dir.condition_file(variant, CHECKPOINT_FILE))?;
    let params = ModelParams::from_checkpoint(&ck, &cfg.pretrain_for_seed(dir.seed, variant))?;
    let graph = load_graph(dir)?;
    let emb = NodeTable::dense(infer_embeddings(&graph, &params)?);
    io::save_node_table(&emb, "e", &dir.condition_file(variant, io::EMBEDDINGS_FILE))?;
    Ok(())
}

/// Returns the number of (train, test) pairs.
pub fn cmd_pairs(cfg: &ExperimentConfig, dir: &SeedDir) -> Result<(usize, usize)> {
    let graph = load_graph(dir)?;
    let events_path = dir.file(io::EVENTS_FILE);
    require(&events_path, "generate")?;
    let events = io::load_events(&events_path, graph.num_nodes())?;
    let mut rng = cfg.pairs_rng(dir.seed);
    let pairs = build_pairs(&graph, &events, cfg.hops, &mut rng)?;
    let s = split(&pairs, cfg.train_frac, &mut rng)?;
    io::save_pairs(&s, &dir.file(io::PAIRS_FILE))?;
    Ok((s.train.len(), s.test.len()))
}

fn load_pairs_and_task(dir: &SeedDir) -> Result<(hgrisk_core::PairDatasetSplit, NodeTable)> {
    let pairs_path = dir.file(io::PAIRS_FILE);
    require(&pairs_path, "pairs")?;
    let task_path = dir.file(io::TASK_FEATURES_FILE);
    require(&task_path, "generate")?;
    Ok((io::load_pairs(&pairs_path)?, io::load_node_table(&task_path, "t")?))
}

pub fn cmd_train(cfg: &ExperimentConfig, dir: &SeedDir, condition: Condition) -> Result<()> {
    let (pairs, task) = load_pairs_and_task(dir)?;
    let emb = load_embeddings(dir, condition)?;
    let model = train_classifier(&pairs.train, &task, emb.as_ref(), &cfg.classifier)?;
    let path = dir.condition_file(condition, MODEL_FILE);
    ensure_parent(&path)?;
    io::save_logistic_model(&model, &path)?;
    Ok(())
}

pub fn cmd_evaluate(dir: &SeedDir, condition: Condition) -> Result<ResultRow> {
    let (pairs, task) = load_pairs_and_task(dir)?;
    let emb = load_embeddings(dir, condition)?;
    let model_path = dir.condition_file(condition, MODEL_FILE);
    require(&model_path, &format!("train --condition {condition}"))?;
    let model = io::load_logistic_model(&model_path)?;
    let metrics = evaluate(&model, &pairs.test, &task, emb.as_ref())?;
    io::save_metrics(condition, dir.seed, &metrics, &dir.condition_file(condition, METRICS_FILE))?;
    Ok(ResultRow {
        condition,
        seed: dir.seed,
        metrics,
    })
}

/// Every stage for one seed, in dependency order.
pub fn run_seed(cfg: &ExperimentConfig, dir: &SeedDir, log: &dyn Fn(String)) -> Result<()> {
    cmd_generate(cfg, dir)?;
    for variant in [Condition::Hgmae, Condition::Ablation] {
        let (first, last) = cmd_pretrain(cfg, dir, variant)?;
        log(format!("seed {}: pretrain {variant}: loss {first:.4} -> {last:.4}", dir.seed));
        cmd_embed(cfg, dir, variant)?;
    }
    let (n_train, n_test) = cmd_pairs(cfg, dir)?;
    log(format!("seed {}: {n_train} train / {n_test} test pairs", dir.seed));
    for condition in Condition::ALL {
        cmd_train(cfg, dir, condition)?;
        let row = cmd_evaluate(dir, condition)?;
        log(format!(
            "seed {}: {condition}: micro-F1 {:.4}, AUC {:.4}",
            dir.seed, row.metrics.micro_f1, row.metrics.auc
        ));
    }
    Ok(())
}

/// Gathers every seed's metrics files into `results.tsv` and
/// `summary.txt`.
pub fn collect_results(out: &Path, seeds: &[u64]) -> Result<ComparisonTable> {
    let mut rows = Vec::new();
    for &seed in seeds {
        let dir = SeedDir::new(out, seed);
        for condition in Condition::ALL {
            let path = dir.condition_file(condition, METRICS_FILE);
            require(&path, &format!("evaluate --condition {condition} --seed {seed}"))?;
            let (c, s, metrics) = io::load_metrics(&path)?;
            if c != condition || s != seed {
                bail!("{} holds {c} seed {s}, expected {condition} seed {seed}", path.display());
            }
            rows.push(ResultRow { condition, seed, metrics });
        }
    }
    let table = ComparisonTable::from_rows(rows);
    io::write_atomic(&out.join(RESULTS_FILE), &table.to_tsv())?;
    io::write_atomic(&out.join(SUMMARY_FILE), &table.human_summary())?;
    Ok(table)
}

/// The full experiment. Seeds run on separate threads; results are merged
/// in seed order, so output does not depend on scheduling.
pub fn run_all(cfg: &ExperimentConfig, out: &Path, log: &(dyn Fn(String) + Sync)) -> Result<ComparisonTable> {
    cfg.validate()?;
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    let results: Vec<Result<()>> = thread::scope(|scope| {
        let handles: Vec<_> = cfg
            .seeds
            .iter()
            .map(|&seed| {
                scope.spawn(move || {
                    let dir = SeedDir::new(out, seed);
                    run_seed(cfg, &dir, log).with_context(|| format!("seed {seed}"))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(anyhow::anyhow!("worker panicked"))))
            .collect()
    });
    for r in results {
        r?;
    }
    collect_results(out, &cfg.seeds)
}
