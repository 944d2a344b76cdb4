//! Heterogeneous enterprise graph: typed undirected edges over a dense
//! feature matrix, with a bond-issuer flag per node.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::tensor::Matrix;

/// Typed-edge graph. Edges are stored canonically (`src <= dst`), sorted and
/// deduplicated within each type. The same pair may appear under several
/// types.
#[derive(Debug, Clone, PartialEq)]
pub struct HeteroGraph {
    features: Matrix,
    edge_lists: Vec<Vec<(usize, usize)>>,
    edge_type_names: Vec<String>,
    issuer_flags: Vec<bool>,
}

impl HeteroGraph {
    /// Builds a graph, canonicalizing every edge list.
    ///
    /// `edge_lists[k]` holds the edges of type `k`; its length must equal
    /// `edge_type_names.len()`.
    pub fn new(
        features: Matrix,
        issuer_flags: Vec<bool>,
        edge_type_names: Vec<String>,
        edge_lists: Vec<Vec<(usize, usize)>>,
    ) -> Result<Self> {
        let n = features.rows();
        if issuer_flags.len() != n {
            return Err(Error::InvalidGraph(format!(
                "{} issuer flags for {n} nodes",
                issuer_flags.len()
            )));
        }
        if edge_type_names.is_empty() {
            return Err(Error::InvalidGraph("at least one edge type is required".into()));
        }
        if edge_type_names.len() != edge_lists.len() {
            return Err(Error::InvalidGraph(format!(
                "{} edge type names but {} edge lists",
                edge_type_names.len(),
                edge_lists.len()
            )));
        }
        for (i, name) in edge_type_names.iter().enumerate() {
            if edge_type_names[..i].contains(name) {
                return Err(Error::InvalidGraph(format!("duplicate edge type name {name:?}")));
            }
        }
        if !features.is_finite() {
            return Err(Error::InvalidGraph("node features contain non-finite values".into()));
        }
        let mut canonical = Vec::with_capacity(edge_lists.len());
        for list in edge_lists {
            let mut out = Vec::with_capacity(list.len());
            for (u, v) in list {
                for id in [u, v] {
                    if id >= n {
                        return Err(Error::DanglingNode { id, num_nodes: n });
                    }
                }
                if u == v {
                    return Err(Error::InvalidGraph(format!("self-edge on node {u}")));
                }
                out.push((u.min(v), u.max(v)));
            }
            out.sort_unstable();
            out.dedup();
            canonical.push(out);
        }
        Ok(HeteroGraph {
            features,
            edge_lists: canonical,
            edge_type_names,
            issuer_flags,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.features.rows()
    }

    pub fn feature_dim(&self) -> usize {
        self.features.cols()
    }

    /// Number of declared edge types, including empty ones.
    pub fn num_edge_types(&self) -> usize {
        self.edge_type_names.len()
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn edge_type_names(&self) -> &[String] {
        &self.edge_type_names
    }

    pub fn edges(&self, edge_type: usize) -> &[(usize, usize)] {
        &self.edge_lists[edge_type]
    }

    pub fn edge_lists(&self) -> &[Vec<(usize, usize)>] {
        &self.edge_lists
    }

    pub fn issuer_flags(&self) -> &[bool] {
        &self.issuer_flags
    }

    pub fn is_issuer(&self, node: usize) -> bool {
        self.issuer_flags[node]
    }

    pub fn issuers(&self) -> impl Iterator<Item = usize> + '_ {
        self.issuer_flags
            .iter()
            .enumerate()
            .filter_map(|(i, &f)| f.then_some(i))
    }

    pub fn num_edges(&self) -> usize {
        self.edge_lists.iter().map(Vec::len).sum()
    }

    /// Symmetrized adjacency over the union of all edge types, duplicates
    /// across types collapsed.
    pub fn union_adjacency(&self) -> Adjacency {
        Adjacency::from_edges(self.num_nodes(), self.edge_lists.iter().flatten().copied())
    }

    /// The single-type subgraph for `edge_type`: nodes incident to at least
    /// one edge of that type, indexed in ascending global-id order.
    pub fn extract_subgraph(&self, edge_type: usize) -> Result<Subgraph> {
        if edge_type >= self.num_edge_types() {
            return Err(Error::InvalidGraph(format!(
                "edge type {edge_type} out of range (K = {})",
                self.num_edge_types()
            )));
        }
        let edges = &self.edge_lists[edge_type];
        if edges.is_empty() {
            return Err(Error::EmptySubgraph { edge_type });
        }
        let n = self.num_nodes();
        let mut local = vec![usize::MAX; n];
        for &(u, v) in edges {
            local[u] = 0;
            local[v] = 0;
        }
        let mut parent_node_ids = Vec::new();
        for (g, slot) in local.iter_mut().enumerate() {
            if *slot == 0 {
                *slot = parent_node_ids.len();
                parent_node_ids.push(g);
            }
        }
        let local_edges = edges.iter().map(|&(u, v)| (local[u], local[v])).collect();
        Ok(Subgraph {
            edge_type,
            features: self.features.select_rows(&parent_node_ids),
            parent_node_ids,
            edges: local_edges,
        })
    }
}

/// Single-edge-type view of a [`HeteroGraph`] over local indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Subgraph {
    pub edge_type: usize,
    /// `parent_node_ids[local] = global`.
    pub parent_node_ids: Vec<usize>,
    pub features: Matrix,
    pub edges: Vec<(usize, usize)>,
}

impl Subgraph {
    pub fn num_nodes(&self) -> usize {
        self.parent_node_ids.len()
    }

    pub fn adjacency(&self) -> Adjacency {
        Adjacency::from_edges(self.num_nodes(), self.edges.iter().copied())
    }
}

/// Symmetric neighbor lists without self-loops, each sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    neighbors: Vec<Vec<usize>>,
}

impl Adjacency {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut neighbors = vec![Vec::new(); n];
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for {n} nodes");
            if u != v {
                neighbors[u].push(v);
                neighbors[v].push(u);
            }
        }
        for list in &mut neighbors {
            list.sort_unstable();
            list.dedup();
        }
        Adjacency { neighbors }
    }

    pub fn num_nodes(&self) -> usize {
        self.neighbors.len()
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[node]
    }

    /// Neighbor lists with each node's self-loop merged in, still ascending.
    pub fn with_self_loops(&self) -> Vec<Vec<usize>> {
        self.neighbors
            .iter()
            .enumerate()
            .map(|(i, list)| {
                let pos = list.partition_point(|&j| j < i);
                let mut out = Vec::with_capacity(list.len() + 1);
                out.extend_from_slice(&list[..pos]);
                out.push(i);
                out.extend_from_slice(&list[pos..]);
                out
            })
            .collect()
    }

    /// Hop distances from `source`, `None` beyond `max_hops` or unreachable.
    pub fn bfs_distances(&self, source: usize, max_hops: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.num_nodes()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            if d == max_hops {
                continue;
            }
            for &v in &self.neighbors[u] {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }
}
