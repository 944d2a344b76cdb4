//! Issuer-to-issuer propagation pairs built from cascade events.
//!
//! Every defaulted issuer is a source. Its targets are the other issuers
//! within `N` hops over the union of all edge types. A pair is black (1)
//! when the target defaulted strictly after the source, white (0)
//! otherwise. White pairs are then downsampled to the black count.

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::HeteroGraph;
use crate::synth::DefaultEvent;

pub const DEFAULT_HOPS: usize = 3;
pub const MIN_PER_CLASS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PropagationPair {
    pub source_id: usize,
    pub target_id: usize,
    /// 1 = black (target defaulted after source), 0 = white.
    pub label: u8,
    pub hop_distance: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairDatasetSplit {
    pub train: Vec<PropagationPair>,
    pub test: Vec<PropagationPair>,
}

fn default_times(num_nodes: usize, events: &[DefaultEvent]) -> Result<Vec<Option<u32>>> {
    let mut time = vec![None; num_nodes];
    for e in events {
        if e.node_id >= num_nodes {
            return Err(Error::DanglingNode {
                id: e.node_id,
                num_nodes,
            });
        }
        if time[e.node_id].replace(e.default_time).is_some() {
            return Err(Error::InvalidGraph(format!("two default events for node {}", e.node_id)));
        }
    }
    Ok(time)
}

/// Labeled pairs before class balancing, ordered by source id then target id.
pub fn candidate_pairs(g: &HeteroGraph, events: &[DefaultEvent], hops: usize) -> Result<Vec<PropagationPair>> {
    if hops == 0 {
        return Err(Error::Config(vec!["pairs.N must be >= 1".into()]));
    }
    let time = default_times(g.num_nodes(), events)?;
    let adj = g.union_adjacency();
    let mut pairs = Vec::new();
    let mut any_source = false;
    for source in g.issuers() {
        let Some(t_source) = time[source] else {
            continue;
        };
        any_source = true;
        let dist = adj.bfs_distances(source, hops);
        for target in g.issuers() {
            let Some(d) = dist[target] else {
                continue;
            };
            if target == source {
                continue;
            }
            let label = u8::from(time[target].is_some_and(|t| t > t_source));
            pairs.push(PropagationPair {
                source_id: source,
                target_id: target,
                label,
                hop_distance: d,
            });
        }
    }
    if !any_source {
        return Err(Error::Config(vec!["no defaulted issuer to use as a source".into()]));
    }
    Ok(pairs)
}

/// Keeps every black pair and a uniform sample of as many white pairs (all
/// of them if there are fewer), preserving input order.
pub fn balance(pairs: &[PropagationPair], rng: &mut impl Rng) -> Vec<PropagationPair> {
    let (black, white): (Vec<usize>, Vec<usize>) = (0..pairs.len()).partition(|&i| pairs[i].label == 1);
    let mut keep = black.clone();
    if white.len() > black.len() {
        keep.extend(index::sample(rng, white.len(), black.len()).into_iter().map(|k| white[k]));
    } else {
        keep.extend(white);
    }
    keep.sort_unstable();
    keep.into_iter().map(|i| pairs[i]).collect()
}

/// Candidate construction followed by white-pair downsampling.
pub fn build_pairs(
    g: &HeteroGraph,
    events: &[DefaultEvent],
    hops: usize,
    rng: &mut impl Rng,
) -> Result<Vec<PropagationPair>> {
    let candidates = candidate_pairs(g, events, hops)?;
    if !candidates.iter().any(|p| p.label == 1) {
        return Err(Error::NoPositiveSamples);
    }
    Ok(balance(&candidates, rng))
}

/// Stratified split: within each class, a uniform `round(train_frac·n)`
/// subset goes to train. Both halves keep input order.
pub fn split(pairs: &[PropagationPair], train_frac: f64, rng: &mut impl Rng) -> Result<PairDatasetSplit> {
    if !(train_frac > 0.0 && train_frac < 1.0) {
        return Err(Error::Config(vec![format!("train fraction must be in (0, 1) (got {train_frac})")]));
    }
    let mut in_train = vec![false; pairs.len()];
    for label in [0u8, 1] {
        let members: Vec<usize> = (0..pairs.len()).filter(|&i| pairs[i].label == label).collect();
        if members.len() < MIN_PER_CLASS {
            return Err(Error::ClassTooSmall {
                label,
                count: members.len(),
                min: MIN_PER_CLASS,
            });
        }
        let n_train = (train_frac * members.len() as f64).round() as usize;
        for k in index::sample(rng, members.len(), n_train) {
            in_train[members[k]] = true;
        }
    }
    let mut out = PairDatasetSplit::default();
    for (p, t) in pairs.iter().zip(in_train) {
        if t {
            out.train.push(*p);
        } else {
            out.test.push(*p);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::Matrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn line_graph(n: usize, issuers: Vec<bool>) -> HeteroGraph {
        let edges = (0..n - 1).map(|i| (i, i + 1)).collect();
        HeteroGraph::new(Matrix::zeros(n, 1), issuers, vec!["r".into()], vec![edges]).unwrap()
    }

    fn ev(node_id: usize, default_time: u32) -> DefaultEvent {
        DefaultEvent { node_id, default_time }
    }

    #[test]
    fn later_default_is_black() {
        let g = line_graph(2, vec![true, true]);
        let pairs = candidate_pairs(&g, &[ev(0, 0), ev(1, 2)], 3).unwrap();
        // node 1 also defaulted, so it is a source too
        assert_eq!(
            pairs,
            vec![
                PropagationPair { source_id: 0, target_id: 1, label: 1, hop_distance: 1 },
                PropagationPair { source_id: 1, target_id: 0, label: 0, hop_distance: 1 },
            ]
        );
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let built = build_pairs(&g, &[ev(0, 0), ev(1, 2)], 3, &mut rng).unwrap();
        assert_eq!(built.len(), 2);
    }

    #[test]
    fn same_tick_default_is_white() {
        let g = line_graph(2, vec![true, true]);
        let pairs = candidate_pairs(&g, &[ev(0, 1), ev(1, 1)], 3).unwrap();
        assert!(pairs.iter().all(|p| p.label == 0));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            build_pairs(&g, &[ev(0, 1), ev(1, 1)], 3, &mut rng),
            Err(Error::NoPositiveSamples)
        ));
    }

    #[test]
    fn hop_limit_and_non_issuers_respected() {
        let g = line_graph(6, vec![true, false, true, true, true, true]);
        let pairs = candidate_pairs(&g, &[ev(0, 0)], 3).unwrap();
        let targets: Vec<(usize, usize)> = pairs.iter().map(|p| (p.target_id, p.hop_distance)).collect();
        assert_eq!(targets, vec![(2, 2), (3, 3)]);
    }

    #[test]
    fn non_issuer_defaults_are_not_sources() {
        let g = line_graph(3, vec![true, false, true]);
        let err = candidate_pairs(&g, &[ev(1, 0)], 3);
        assert!(err.is_err());
    }

    #[test]
    fn balancing_keeps_every_black_pair() {
        let pairs: Vec<PropagationPair> = (0..30)
            .map(|i| PropagationPair {
                source_id: 0,
                target_id: i + 1,
                label: u8::from(i % 5 == 0),
                hop_distance: 1,
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let out = balance(&pairs, &mut rng);
        let blacks = out.iter().filter(|p| p.label == 1).count();
        assert_eq!(blacks, 6);
        assert_eq!(out.len(), 12);
        assert!(out.iter().all(|p| pairs.contains(p)));
    }

    fn balanced(n_per_class: usize) -> Vec<PropagationPair> {
        (0..2 * n_per_class)
            .map(|i| PropagationPair {
                source_id: i / 7,
                target_id: i,
                label: (i % 2) as u8,
                hop_distance: 1,
            })
            .collect()
    }

    #[test]
    fn stratified_eighty_twenty() {
        let pairs = balanced(50);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = split(&pairs, 0.8, &mut rng).unwrap();
        assert_eq!(s.train.len(), 80);
        assert_eq!(s.test.len(), 20);
        assert_eq!(s.train.iter().filter(|p| p.label == 1).count(), 40);
        assert_eq!(s.test.iter().filter(|p| p.label == 1).count(), 10);
        let mut all: Vec<_> = s.train.iter().chain(&s.test).copied().collect();
        all.sort_by_key(|p| p.target_id);
        assert_eq!(all, pairs);
        let again = split(&pairs, 0.8, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn tiny_class_rejected() {
        let pairs = balanced(4);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(matches!(split(&pairs, 0.8, &mut rng), Err(Error::ClassTooSmall { .. })));
    }
}
