//! Synthetic enterprise knowledge graphs with a planted default cascade.
//!
//! Nodes are assigned to communities. Every edge type is a stochastic block
//! model with its own intra/inter-community probabilities. Node features are
//! a one-hot community signature plus Gaussian noise. Each node carries a
//! latent susceptibility whose mean depends on its community; defaults
//! spread by an independent cascade whose per-edge success probability
//! depends on the edge type and the receiving node's susceptibility.
//!
//! Every random quantity is drawn from its own ChaCha stream keyed by
//! `rng_seed`, so the graph, the cascade and the task features can be
//! regenerated independently and always agree.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::graph::HeteroGraph;
use crate::io::NodeTable;
use crate::tensor::Matrix;

const RELATION_NAMES: [&str; 5] = [
    "parent-subsidiary",
    "share-investor",
    "share-manager",
    "share-legal-person",
    "invest-by",
];

/// Standard deviation of the per-node susceptibility around its community
/// mean.
const SUSCEPTIBILITY_SPREAD: f64 = 0.15;
const MIN_SUSCEPTIBILITY: f64 = 0.05;

#[derive(Clone, Copy)]
#[repr(u64)]
enum Stream {
    Community = 1,
    Features = 2,
    Edges = 3,
    Issuers = 4,
    Susceptibility = 5,
    Seeds = 6,
    Cascade = 7,
    Task = 8,
}

fn stream_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub num_nodes: usize,
    pub num_communities: usize,
    pub num_edge_types: usize,
    pub d_in: usize,
    pub d_task: usize,
    pub issuer_fraction: f64,
    pub intra_edge_prob: Vec<f64>,
    pub inter_edge_prob: Vec<f64>,
    pub transmission_prob: Vec<f64>,
    pub num_seed_defaults: usize,
    pub max_cascade_hops: u32,
    pub noise_std: f64,
    /// Weight of the susceptibility indicator in task feature `t0`.
    pub task_signal: f64,
    pub rng_seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            num_nodes: 200,
            num_communities: 3,
            num_edge_types: 3,
            d_in: 8,
            d_task: 4,
            issuer_fraction: 0.5,
            intra_edge_prob: vec![0.04, 0.02, 0.02],
            inter_edge_prob: vec![0.002, 0.01, 0.01],
            transmission_prob: vec![0.6, 0.15, 0.15],
            num_seed_defaults: 8,
            max_cascade_hops: 4,
            noise_std: 0.3,
            task_signal: 1.0,
            rng_seed: 7,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        let k = self.num_edge_types;
        if self.num_nodes < 2 {
            errs.push(format!("gen.num_nodes must be >= 2 (got {})", self.num_nodes));
        }
        if self.num_communities == 0 {
            errs.push("gen.num_communities must be >= 1".to_string());
        }
        if k == 0 {
            errs.push("gen.num_edge_types must be >= 1".to_string());
        }
        if self.d_in < self.num_communities {
            errs.push(format!(
                "gen.d_in ({}) must be >= gen.num_communities ({})",
                self.d_in, self.num_communities
            ));
        }
        if !(self.issuer_fraction > 0.0 && self.issuer_fraction <= 1.0) {
            errs.push(format!("gen.issuer_fraction must be in (0, 1] (got {})", self.issuer_fraction));
        }
        for (name, v) in [
            ("gen.intra_edge_prob", &self.intra_edge_prob),
            ("gen.inter_edge_prob", &self.inter_edge_prob),
            ("gen.transmission_prob", &self.transmission_prob),
        ] {
            if v.len() != k {
                errs.push(format!("{name} has {} entries, expected {k}", v.len()));
            }
            if let Some(p) = v.iter().find(|p| !(0.0..=1.0).contains(*p)) {
                errs.push(format!("{name} contains {p}, outside [0, 1]"));
            }
        }
        if self.num_seed_defaults == 0 {
            errs.push("gen.num_seed_defaults must be >= 1".to_string());
        } else if self.num_seed_defaults > self.num_issuers() {
            errs.push(format!(
                "gen.num_seed_defaults ({}) exceeds the issuer count ({})",
                self.num_seed_defaults,
                self.num_issuers()
            ));
        }
        if !(self.noise_std >= 0.0 && self.noise_std.is_finite()) {
            errs.push(format!("gen.noise_std must be >= 0 (got {})", self.noise_std));
        }
        if !self.task_signal.is_finite() {
            errs.push("gen.task_signal must be finite".to_string());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(errs))
        }
    }

    pub fn num_issuers(&self) -> usize {
        (self.issuer_fraction * self.num_nodes as f64).round() as usize
    }

    pub fn edge_type_names(&self) -> Vec<String> {
        (0..self.num_edge_types)
            .map(|k| match RELATION_NAMES.get(k) {
                Some(name) => name.to_string(),
                None => format!("relation-{k}"),
            })
            .collect()
    }
}

/// A planted default: `node_id` defaulted at integer tick `default_time`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct DefaultEvent {
    pub node_id: usize,
    pub default_time: u32,
}

/// Hidden generative state, reproducible from the config alone.
#[derive(Debug, Clone, PartialEq)]
pub struct Latent {
    pub community: Vec<usize>,
    pub susceptibility: Vec<f64>,
}

/// Balanced community assignment (sizes differ by at most one), shuffled,
/// and per-node susceptibility drawn around a community mean that decreases
/// linearly from 1 for community 0.
pub fn latent(cfg: &GenConfig) -> Latent {
    let n = cfg.num_nodes;
    let c = cfg.num_communities;
    let mut community: Vec<usize> = (0..n).map(|i| i % c).collect();
    community.shuffle(&mut stream_rng(cfg.rng_seed, Stream::Community));

    let mut rng = stream_rng(cfg.rng_seed, Stream::Susceptibility);
    let susceptibility = community
        .iter()
        .map(|&ci| {
            let base = (c - ci) as f64 / c as f64;
            let z: f64 = rng.sample(StandardNormal);
            (base + SUSCEPTIBILITY_SPREAD * z).clamp(MIN_SUSCEPTIBILITY, 1.0)
        })
        .collect();
    Latent {
        community,
        susceptibility,
    }
}

pub fn generate_graph(cfg: &GenConfig) -> Result<HeteroGraph> {
    cfg.validate()?;
    let n = cfg.num_nodes;
    let lat = latent(cfg);

    let mut rng = stream_rng(cfg.rng_seed, Stream::Features);
    let features = Matrix::from_fn(n, cfg.d_in, |i, j| {
        let signature = if j == lat.community[i] { 1.0 } else { 0.0 };
        let z: f64 = rng.sample(StandardNormal);
        signature + cfg.noise_std * z
    });

    let mut rng = stream_rng(cfg.rng_seed, Stream::Edges);
    let mut edge_lists = vec![Vec::new(); cfg.num_edge_types];
    for (k, list) in edge_lists.iter_mut().enumerate() {
        for u in 0..n {
            for v in (u + 1)..n {
                let p = if lat.community[u] == lat.community[v] {
                    cfg.intra_edge_prob[k]
                } else {
                    cfg.inter_edge_prob[k]
                };
                if rng.gen::<f64>() < p {
                    list.push((u, v));
                }
            }
        }
    }

    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(&mut stream_rng(cfg.rng_seed, Stream::Issuers));
    let mut issuer_flags = vec![false; n];
    for &i in &ids[..cfg.num_issuers()] {
        issuer_flags[i] = true;
    }

    HeteroGraph::new(features, issuer_flags, cfg.edge_type_names(), edge_lists)
}

/// Probability that a default crosses one type-`k` edge into a node with
/// susceptibility `s`: `1 - (1 - p_k)^s`. Equals `p_k` at `s = 1` and keeps
/// the `p_k = 0` and `p_k = 1` endpoints.
pub fn transmission_probability(p: f64, susceptibility: f64) -> f64 {
    1.0 - (1.0 - p).powf(susceptibility)
}

/// Seeds: `num_seed_defaults` issuers chosen uniformly.
pub fn cascade_seeds(g: &HeteroGraph, cfg: &GenConfig) -> Vec<usize> {
    let issuers: Vec<usize> = g.issuers().collect();
    let mut seeds: Vec<usize> = issuers
        .choose_multiple(&mut stream_rng(cfg.rng_seed, Stream::Seeds), cfg.num_seed_defaults)
        .copied()
        .collect();
    seeds.sort_unstable();
    seeds
}

/// One uniform per directed transmission attempt, in the order: edge type,
/// stored edge `(u, v)`, then direction `u -> v` before `v -> u`.
///
/// Drawing all uniforms up front couples runs that differ only in
/// transmission probabilities.
pub fn transmission_uniforms(g: &HeteroGraph, cfg: &GenConfig) -> Vec<Vec<[f64; 2]>> {
    let mut rng = stream_rng(cfg.rng_seed, Stream::Cascade);
    g.edge_lists()
        .iter()
        .map(|list| list.iter().map(|_| [rng.gen::<f64>(), rng.gen::<f64>()]).collect())
        .collect()
}

/// Independent cascade from the seed issuers. A newly defaulted node gets a
/// single chance per incident edge (per type) to infect each neighbor on the
/// next tick; the process stops after `max_cascade_hops` ticks.
///
/// Because each attempt happens at most once, the outcome equals shortest
/// paths over the "live" directed edges whose uniform fell under the
/// transmission probability, which is how it is computed here.
pub fn simulate_cascade(g: &HeteroGraph, cfg: &GenConfig) -> Result<Vec<DefaultEvent>> {
    cfg.validate()?;
    if g.num_nodes() != cfg.num_nodes || g.num_edge_types() != cfg.num_edge_types {
        return Err(Error::InvalidGraph("graph does not match the generator config".into()));
    }
    let n = g.num_nodes();
    let lat = latent(cfg);
    let uniforms = transmission_uniforms(g, cfg);

    let mut live: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, list) in g.edge_lists().iter().enumerate() {
        let p = cfg.transmission_prob[k];
        for (&(u, v), draw) in list.iter().zip(&uniforms[k]) {
            if draw[0] < transmission_probability(p, lat.susceptibility[v]) {
                live[u].push(v);
            }
            if draw[1] < transmission_probability(p, lat.susceptibility[u]) {
                live[v].push(u);
            }
        }
    }

    let mut time: Vec<Option<u32>> = vec![None; n];
    let mut frontier = cascade_seeds(g, cfg);
    for &s in &frontier {
        time[s] = Some(0);
    }
    for tick in 1..=cfg.max_cascade_hops {
        let mut next = Vec::new();
        for &u in &frontier {
            for &v in &live[u] {
                if time[v].is_none() {
                    time[v] = Some(tick);
                    next.push(v);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }

    let mut events: Vec<DefaultEvent> = time
        .iter()
        .enumerate()
        .filter_map(|(node_id, t)| t.map(|default_time| DefaultEvent { node_id, default_time }))
        .collect();
    events.sort_by_key(|e| (e.default_time, e.node_id));
    Ok(events)
}

/// Task-specific features for every issuer, rows in ascending node id.
///
/// `t0 = task_signal * susceptibility + noise`; the remaining dimensions are
/// pure noise. All noise is `N(0, noise_std²)`.
pub fn attach_task_features(g: &HeteroGraph, cfg: &GenConfig) -> Result<NodeTable> {
    cfg.validate()?;
    if g.num_nodes() != cfg.num_nodes {
        return Err(Error::InvalidGraph("graph does not match the generator config".into()));
    }
    let lat = latent(cfg);
    let ids: Vec<usize> = g.issuers().collect();
    let mut rng = stream_rng(cfg.rng_seed, Stream::Task);
    let values = Matrix::from_fn(ids.len(), cfg.d_task, |r, j| {
        let z: f64 = rng.sample(StandardNormal);
        let signal = if j == 0 {
            cfg.task_signal * lat.susceptibility[ids[r]]
        } else {
            0.0
        };
        signal + cfg.noise_std * z
    });
    NodeTable::new(ids, values)
}

/// `gen.config`: flat `key=value` lines, vectors comma-separated.
pub fn format_config(cfg: &GenConfig) -> String {
    let join = |v: &[f64]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",");
    format!(
        "num_nodes={}\nnum_communities={}\nnum_edge_types={}\nd_in={}\nd_task={}\n\
         issuer_fraction={}\nintra_edge_prob={}\ninter_edge_prob={}\ntransmission_prob={}\n\
         num_seed_defaults={}\nmax_cascade_hops={}\nnoise_std={}\ntask_signal={}\nrng_seed={}\n",
        cfg.num_nodes,
        cfg.num_communities,
        cfg.num_edge_types,
        cfg.d_in,
        cfg.d_task,
        cfg.issuer_fraction,
        join(&cfg.intra_edge_prob),
        join(&cfg.inter_edge_prob),
        join(&cfg.transmission_prob),
        cfg.num_seed_defaults,
        cfg.max_cascade_hops,
        cfg.noise_std,
        cfg.task_signal,
        cfg.rng_seed,
    )
}

/// Applies one `key=value` setting (key without the `gen.` prefix).
pub fn set_config_field(cfg: &mut GenConfig, key: &str, value: &str) -> std::result::Result<(), String> {
    fn num<T: std::str::FromStr>(key: &str, v: &str) -> std::result::Result<T, String> {
        v.trim()
            .parse()
            .map_err(|_| format!("gen.{key}: cannot parse {v:?}"))
    }
    fn vec(key: &str, v: &str) -> std::result::Result<Vec<f64>, String> {
        v.split(',').map(|p| num(key, p)).collect()
    }
    match key {
        "num_nodes" => cfg.num_nodes = num(key, value)?,
        "num_communities" => cfg.num_communities = num(key, value)?,
        "num_edge_types" | "K" => cfg.num_edge_types = num(key, value)?,
        "d_in" => cfg.d_in = num(key, value)?,
        "d_task" => cfg.d_task = num(key, value)?,
        "issuer_fraction" => cfg.issuer_fraction = num(key, value)?,
        "intra_edge_prob" => cfg.intra_edge_prob = vec(key, value)?,
        "inter_edge_prob" => cfg.inter_edge_prob = vec(key, value)?,
        "transmission_prob" => cfg.transmission_prob = vec(key, value)?,
        "num_seed_defaults" => cfg.num_seed_defaults = num(key, value)?,
        "max_cascade_hops" => cfg.max_cascade_hops = num(key, value)?,
        "noise_std" => cfg.noise_std = num(key, value)?,
        "task_signal" => cfg.task_signal = num(key, value)?,
        "rng_seed" => cfg.rng_seed = num(key, value)?,
        _ => return Err(format!("unknown key gen.{key}")),
    }
    Ok(())
}

pub fn parse_config(text: &str) -> Result<GenConfig> {
    let mut cfg = GenConfig::default();
    let mut errs = Vec::new();
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.split_once('=') {
            Some((k, v)) => {
                let k = k.trim();
                if let Err(e) = set_config_field(&mut cfg, k.strip_prefix("gen.").unwrap_or(k), v.trim()) {
                    errs.push(e);
                }
            }
            None => errs.push(format!("not a key=value line: {line:?}")),
        }
    }
    if !errs.is_empty() {
        return Err(Error::Config(errs));
    }
    cfg.validate()?;
    Ok(cfg)
}
