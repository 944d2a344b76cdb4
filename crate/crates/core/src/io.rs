//! Tab-separated artifact formats.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), which
//! round-trips every finite `f64` exactly. All writers go through
//! [`write_atomic`].

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::downstream::{Condition, LogisticModel, Metrics, Standardizer};
use crate::error::{Error, Result};
use crate::graph::HeteroGraph;
use crate::hgmae::EpochLog;
use crate::pairs::{PairDatasetSplit, PropagationPair};
use crate::synth::DefaultEvent;
use crate::tensor::Matrix;

pub const NODES_FILE: &str = "nodes.tsv";
pub const EDGES_FILE: &str = "edges.tsv";
pub const EVENTS_FILE: &str = "events.tsv";
pub const TASK_FEATURES_FILE: &str = "task_features.tsv";
pub const EMBEDDINGS_FILE: &str = "embeddings.tsv";
pub const PAIRS_FILE: &str = "pairs.tsv";

/// Optional first line of `edges.tsv` declaring every type name in id order,
/// so that types without edges survive a round trip.
const EDGE_TYPES_DECL: &str = "#edge_types";

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `contents` to a sibling temp file and renames it over `path`.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Numbered non-empty lines of a TSV file, header first. Line numbers are
/// 1-based.
struct TsvLines<'a> {
    path: &'a Path,
    lines: Vec<(usize, Vec<&'a str>)>,
}

impl<'a> TsvLines<'a> {
    fn new(path: &'a Path, text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| (i + 1, l.split('\t').collect()))
            .collect();
        TsvLines { path, lines }
    }

    fn err(&self, line: usize, msg: impl Into<String>) -> Error {
        Error::parse(self.path, line, msg)
    }

    /// Splits off the header and checks its leading fixed columns.
    fn header(&mut self, fixed: &[&str]) -> Result<(usize, Vec<String>)> {
        if self.lines.is_empty() {
            return Err(self.err(1, "missing header"));
        }
        let (line, cols) = self.lines.remove(0);
        if cols.len() < fixed.len() || cols[..fixed.len()] != *fixed {
            return Err(self.err(line, format!("expected header starting with {}", fixed.join("\\t"))));
        }
        Ok((line, cols[fixed.len()..].iter().map(|s| s.to_string()).collect()))
    }

    fn parse_usize(&self, line: usize, field: &str, what: &str) -> Result<usize> {
        field
            .parse()
            .map_err(|_| self.err(line, format!("invalid {what}: {field:?}")))
    }

    fn parse_f64(&self, line: usize, field: &str) -> Result<f64> {
        let v: f64 = field
            .parse()
            .map_err(|_| self.err(line, format!("invalid number: {field:?}")))?;
        if !v.is_finite() {
            return Err(self.err(line, format!("non-finite value: {field:?}")));
        }
        Ok(v)
    }
}

/// Checks that `cols` is exactly `prefix0, prefix1, ...`.
fn check_indexed_columns(t: &TsvLines, line: usize, cols: &[String], prefix: &str) -> Result<()> {
    for (i, c) in cols.iter().enumerate() {
        if *c != format!("{prefix}{i}") {
            return Err(t.err(line, format!("expected column {prefix}{i}, found {c:?}")));
        }
    }
    Ok(())
}

pub fn save_graph(g: &HeteroGraph, dir: &Path) -> Result<()> {
    let d = g.feature_dim();
    let mut nodes = String::from("node_id\tis_issuer");
    for j in 0..d {
        let _ = write!(nodes, "\tf{j}");
    }
    nodes.push('\n');
    for i in 0..g.num_nodes() {
        let _ = write!(nodes, "{i}\t{}", u8::from(g.is_issuer(i)));
        for &v in g.features().row(i) {
            let _ = write!(nodes, "\t{}", fmt_f64(v));
        }
        nodes.push('\n');
    }

    let mut edges = String::from(EDGE_TYPES_DECL);
    for name in g.edge_type_names() {
        let _ = write!(edges, "\t{name}");
    }
    edges.push_str("\nedge_type\tsrc\tdst\n");
    for (k, name) in g.edge_type_names().iter().enumerate() {
        for &(u, v) in g.edges(k) {
            let _ = writeln!(edges, "{name}\t{u}\t{v}");
        }
    }
    write_atomic(&dir.join(NODES_FILE), &nodes)?;
    write_atomic(&dir.join(EDGES_FILE), &edges)
}

pub fn load_graph(dir: &Path) -> Result<HeteroGraph> {
    let nodes_path = dir.join(NODES_FILE);
    let text = read_to_string(&nodes_path)?;
    let mut t = TsvLines::new(&nodes_path, &text);
    let (hline, fcols) = t.header(&["node_id", "is_issuer"])?;
    check_indexed_columns(&t, hline, &fcols, "f")?;
    let d = fcols.len();
    let mut values = Vec::with_capacity(t.lines.len() * d);
    let mut flags = Vec::with_capacity(t.lines.len());
    for (expected, (line, cols)) in t.lines.iter().enumerate() {
        let line = *line;
        if cols.len() != d + 2 {
            return Err(t.err(line, format!("expected {} fields, found {}", d + 2, cols.len())));
        }
        let id = t.parse_usize(line, cols[0], "node id")?;
        if id != expected {
            return Err(t.err(line, format!("node ids must be dense and ordered: expected {expected}, found {id}")));
        }
        flags.push(match cols[1] {
            "0" => false,
            "1" => true,
            other => return Err(t.err(line, format!("is_issuer must be 0 or 1, found {other:?}"))),
        });
        for f in &cols[2..] {
            values.push(t.parse_f64(line, f)?);
        }
    }
    let n = flags.len();
    let features = Matrix::from_vec(n, d, values)?;

    let edges_path = dir.join(EDGES_FILE);
    let text = read_to_string(&edges_path)?;
    let mut t = TsvLines::new(&edges_path, &text);
    let mut names: Vec<String> = Vec::new();
    let declared = t
        .lines
        .first()
        .is_some_and(|(_, cols)| cols[0] == EDGE_TYPES_DECL);
    if declared {
        let (_, cols) = t.lines.remove(0);
        names = cols[1..].iter().map(|s| s.to_string()).collect();
    }
    t.header(&["edge_type", "src", "dst"])?;
    let mut lists: Vec<Vec<(usize, usize)>> = vec![Vec::new(); names.len()];
    for (line, cols) in &t.lines {
        let line = *line;
        if cols.len() != 3 {
            return Err(t.err(line, format!("expected 3 fields, found {}", cols.len())));
        }
        let k = match names.iter().position(|nm| nm == cols[0]) {
            Some(k) => k,
            None if declared => {
                return Err(t.err(line, format!("undeclared edge type {:?}", cols[0])));
            }
            None => {
                names.push(cols[0].to_string());
                lists.push(Vec::new());
                names.len() - 1
            }
        };
        let u = t.parse_usize(line, cols[1], "src")?;
        let v = t.parse_usize(line, cols[2], "dst")?;
        for id in [u, v] {
            if id >= n {
                return Err(Error::DanglingNode { id, num_nodes: n });
            }
        }
        lists[k].push((u, v));
    }
    HeteroGraph::new(features, flags, names, lists)
}

pub fn save_events(events: &[DefaultEvent], path: &Path) -> Result<()> {
    let mut out = String::from("node_id\tdefault_time\n");
    for e in events {
        let _ = writeln!(out, "{}\t{}", e.node_id, e.default_time);
    }
    write_atomic(path, &out)
}

pub fn load_events(path: &Path, num_nodes: usize) -> Result<Vec<DefaultEvent>> {
    let text = read_to_string(path)?;
    let mut t = TsvLines::new(path, &text);
    t.header(&["node_id", "default_time"])?;
    let mut seen = vec![false; num_nodes];
    let mut events = Vec::with_capacity(t.lines.len());
    for (line, cols) in &t.lines {
        let line = *line;
        if cols.len() != 2 {
            return Err(t.err(line, format!("expected 2 fields, found {}", cols.len())));
        }
        let node_id = t.parse_usize(line, cols[0], "node id")?;
        if node_id >= num_nodes {
            return Err(Error::DanglingNode { id: node_id, num_nodes });
        }
        if std::mem::replace(&mut seen[node_id], true) {
            return Err(t.err(line, format!("duplicate event for node {node_id}")));
        }
        let default_time = t.parse_usize(line, cols[1], "default_time")? as u32;
        events.push(DefaultEvent { node_id, default_time });
    }
    Ok(events)
}

/// Per-node feature rows keyed by node id (task features, embeddings).
#[derive(Debug, Clone, PartialEq)]
pub struct NodeTable {
    ids: Vec<usize>,
    values: Matrix,
    index: HashMap<usize, usize>,
}

impl NodeTable {
    pub fn new(ids: Vec<usize>, values: Matrix) -> Result<Self> {
        if ids.len() != values.rows() {
            return Err(Error::Shape(format!(
                "{} ids for {} rows",
                ids.len(),
                values.rows()
            )));
        }
        let mut index = HashMap::with_capacity(ids.len());
        for (r, &id) in ids.iter().enumerate() {
            if index.insert(id, r).is_some() {
                return Err(Error::Shape(format!("duplicate node id {id}")));
            }
        }
        Ok(NodeTable { ids, values, index })
    }

    /// Every row of `values` belongs to the node with the same index.
    pub fn dense(values: Matrix) -> Self {
        let ids = (0..values.rows()).collect();
        NodeTable::new(ids, values).expect("dense ids are unique")
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.cols()
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn get(&self, node: usize) -> Option<&[f64]> {
        self.index.get(&node).map(|&r| self.values.row(r))
    }
}

pub fn save_node_table(table: &NodeTable, prefix: &str, path: &Path) -> Result<()> {
    let mut out = String::from("node_id");
    for j in 0..table.dim() {
        let _ = write!(out, "\t{prefix}{j}");
    }
    out.push('\n');
    for (r, id) in table.ids.iter().enumerate() {
        let _ = write!(out, "{id}");
        for &v in table.values.row(r) {
            let _ = write!(out, "\t{}", fmt_f64(v));
        }
        out.push('\n');
    }
    write_atomic(path, &out)
}

pub fn load_node_table(path: &Path, prefix: &str) -> Result<NodeTable> {
    let text = read_to_string(path)?;
    let mut t = TsvLines::new(path, &text);
    let (hline, cols) = t.header(&["node_id"])?;
    check_indexed_columns(&t, hline, &cols, prefix)?;
    let d = cols.len();
    let mut ids = Vec::with_capacity(t.lines.len());
    let mut values = Vec::with_capacity(t.lines.len() * d);
    for (line, cols) in &t.lines {
        let line = *line;
        if cols.len() != d + 1 {
            return Err(t.err(line, format!("expected {} fields, found {}", d + 1, cols.len())));
        }
        ids.push(t.parse_usize(line, cols[0], "node id")?);
        for f in &cols[1..] {
            values.push(t.parse_f64(line, f)?);
        }
    }
    let rows = ids.len();
    NodeTable::new(ids, Matrix::from_vec(rows, d, values)?)
        .map_err(|e| Error::parse(path, 0, e.to_string()))
}

pub fn save_pairs(split: &PairDatasetSplit, path: &Path) -> Result<()> {
    let mut out = String::from("source_id\ttarget_id\thop\tlabel\tsplit\n");
    for (tag, pairs) in [("train", &split.train), ("test", &split.test)] {
        for p in pairs {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{tag}",
                p.source_id, p.target_id, p.hop_distance, p.label
            );
        }
    }
    write_atomic(path, &out)
}

pub fn load_pairs(path: &Path) -> Result<PairDatasetSplit> {
    let text = read_to_string(path)?;
    let mut t = TsvLines::new(path, &text);
    t.header(&["source_id", "target_id", "hop", "label", "split"])?;
    let mut split = PairDatasetSplit::default();
    for (line, cols) in &t.lines {
        let line = *line;
        if cols.len() != 5 {
            return Err(t.err(line, format!("expected 5 fields, found {}", cols.len())));
        }
        let pair = PropagationPair {
            source_id: t.parse_usize(line, cols[0], "source_id")?,
            target_id: t.parse_usize(line, cols[1], "target_id")?,
            hop_distance: t.parse_usize(line, cols[2], "hop")?,
            label: match cols[3] {
                "0" => 0,
                "1" => 1,
                other => return Err(t.err(line, format!("label must be 0 or 1, found {other:?}"))),
            },
        };
        match cols[4] {
            "train" => split.train.push(pair),
            "test" => split.test.push(pair),
            other => return Err(t.err(line, format!("split must be train or test, found {other:?}"))),
        }
    }
    Ok(split)
}

pub fn save_pretrain_log(history: &[EpochLog], path: &Path) -> Result<()> {
    let mut out = String::from("epoch\tloss_total\tloss_o\tloss_sub_mean\n");
    for e in history {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}",
            e.epoch,
            fmt_f64(e.loss_total),
            fmt_f64(e.loss_full),
            fmt_f64(e.loss_sub_mean)
        );
    }
    write_atomic(path, &out)
}

pub fn load_pretrain_log(path: &Path) -> Result<Vec<EpochLog>> {
    let text = read_to_string(path)?;
    let mut t = TsvLines::new(path, &text);
    t.header(&["epoch", "loss_total", "loss_o", "loss_sub_mean"])?;
    let mut history = Vec::with_capacity(t.lines.len());
    for (line, cols) in &t.lines {
        let line = *line;
        if cols.len() != 4 {
            return Err(t.err(line, format!("expected 4 fields, found {}", cols.len())));
        }
        history.push(EpochLog {
            epoch: t.parse_usize(line, cols[0], "epoch")?,
            loss_total: t.parse_f64(line, cols[1])?,
            loss_full: t.parse_f64(line, cols[2])?,
            loss_sub_mean: t.parse_f64(line, cols[3])?,
        });
    }
    Ok(history)
}

/// One `w<j>` row per input dimension with its standardization stats, then
/// `bias` and `final_loss` rows carrying only a value.
pub fn save_logistic_model(model: &LogisticModel, path: &Path) -> Result<()> {
    let mut out = String::from("param\tmean\tstd\tvalue\n");
    let s = &model.standardizer;
    for (j, w) in model.weights.iter().enumerate() {
        let _ = writeln!(out, "w{j}\t{}\t{}\t{}", fmt_f64(s.mean[j]), fmt_f64(s.std[j]), fmt_f64(*w));
    }
    let _ = writeln!(out, "bias\t-\t-\t{}", fmt_f64(model.bias));
    let _ = writeln!(out, "final_loss\t-\t-\t{}", fmt_f64(model.final_loss));
    write_atomic(path, &out)
}

pub fn load_logistic_model(path: &Path) -> Result<LogisticModel> {
    let text = read_to_string(path)?;
    let mut t = TsvLines::new(path, &text);
    t.header(&["param", "mean", "std", "value"])?;
    let (mut mean, mut std, mut weights) = (Vec::new(), Vec::new(), Vec::new());
    let (mut bias, mut final_loss) = (None, None);
    for (line, cols) in &t.lines {
        let line = *line;
        if cols.len() != 4 {
            return Err(t.err(line, format!("expected 4 fields, found {}", cols.len())));
        }
        match cols[0] {
            "bias" => bias = Some(t.parse_f64(line, cols[3])?),
            "final_loss" => final_loss = Some(t.parse_f64(line, cols[3])?),
            name if name == format!("w{}", weights.len()) => {
                mean.push(t.parse_f64(line, cols[1])?);
                std.push(t.parse_f64(line, cols[2])?);
                weights.push(t.parse_f64(line, cols[3])?);
            }
            other => return Err(t.err(line, format!("unexpected parameter {other:?}"))),
        }
    }
    let missing = |what: &str| Error::parse(path, 0, format!("missing {what} row"));
    Ok(LogisticModel {
        standardizer: Standardizer { mean, std },
        weights,
        bias: bias.ok_or_else(|| missing("bias"))?,
        final_loss: final_loss.ok_or_else(|| missing("final_loss"))?,
    })
}

/// A single `results.tsv`-style row.
pub fn save_metrics(condition: Condition, seed: u64, m: &Metrics, path: &Path) -> Result<()> {
    let out = format!(
        "condition\tseed\tmicro_f1\taccuracy\tauc\n{condition}\t{seed}\t{}\t{}\t{}\n",
        fmt_f64(m.micro_f1),
        fmt_f64(m.accuracy),
        fmt_f64(m.auc)
    );
    write_atomic(path, &out)
}

pub fn load_metrics(path: &Path) -> Result<(Condition, u64, Metrics)> {
    let text = read_to_string(path)?;
    let mut t = TsvLines::new(path, &text);
    t.header(&["condition", "seed", "micro_f1", "accuracy", "auc"])?;
    let [(line, cols)] = t.lines.as_slice() else {
        return Err(t.err(2, format!("expected exactly one row, found {}", t.lines.len())));
    };
    let line = *line;
    if cols.len() != 5 {
        return Err(t.err(line, format!("expected 5 fields, found {}", cols.len())));
    }
    let condition = cols[0].parse::<Condition>().map_err(|e| t.err(line, e))?;
    let seed = cols[1]
        .parse()
        .map_err(|_| t.err(line, format!("invalid seed: {:?}", cols[1])))?;
    Ok((
        condition,
        seed,
        Metrics {
            micro_f1: t.parse_f64(line, cols[2])?,
            accuracy: t.parse_f64(line, cols[3])?,
            auc: t.parse_f64(line, cols[4])?,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmpdir(name: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("hgrisk-io-{name}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        fs::create_dir_all(&dir).unwrap();
        dir
    }

    fn sample_graph() -> HeteroGraph {
        let x = Matrix::from_fn(4, 3, |i, j| (i as f64 + 1.0) / 3.0 - j as f64 * 1e-300 + 0.1);
        HeteroGraph::new(
            x,
            vec![true, false, true, true],
            vec!["parent-subsidiary".into(), "share-investor".into(), "invest-by".into()],
            vec![vec![(0, 1), (2, 3)], vec![], vec![(3, 0)]],
        )
        .unwrap()
    }

    #[test]
    fn graph_round_trip_is_exact() {
        let dir = tmpdir("roundtrip");
        let g = sample_graph();
        save_graph(&g, &dir).unwrap();
        let h = load_graph(&dir).unwrap();
        assert_eq!(g, h);
        for (a, b) in g.features().as_slice().iter().zip(h.features().as_slice()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn dangling_edge_names_the_id() {
        let dir = tmpdir("dangling");
        let x = Matrix::zeros(10, 1);
        let g = HeteroGraph::new(x, vec![false; 10], vec!["a".into()], vec![vec![]]).unwrap();
        save_graph(&g, &dir).unwrap();
        fs::write(dir.join(EDGES_FILE), "edge_type\tsrc\tdst\na\t1\t999\n").unwrap();
        let err = load_graph(&dir).unwrap_err();
        assert!(matches!(err, Error::DanglingNode { id: 999, num_nodes: 10 }), "{err}");
        assert!(err.to_string().contains("999"));
    }

    #[test]
    fn empty_edges_keep_declared_types() {
        let dir = tmpdir("empty");
        let x = Matrix::from_fn(5, 2, |i, j| (i + j) as f64);
        fs::write(
            dir.join(NODES_FILE),
            {
                let mut s = String::from("node_id\tis_issuer\tf0\tf1\n");
                for i in 0..5 {
                    s.push_str(&format!("{i}\t0\t{}\t{}\n", x.get(i, 0), x.get(i, 1)));
                }
                s
            },
        )
        .unwrap();
        fs::write(dir.join(EDGES_FILE), "#edge_types\tp\tq\nedge_type\tsrc\tdst\n").unwrap();
        let g = load_graph(&dir).unwrap();
        assert_eq!(g.num_nodes(), 5);
        assert_eq!(g.num_edge_types(), 2);
        assert_eq!(g.num_edges(), 0);
    }

    #[test]
    fn types_assigned_in_first_appearance_order() {
        let dir = tmpdir("order");
        fs::write(dir.join(NODES_FILE), "node_id\tis_issuer\tf0\n0\t1\t1\n1\t0\t2\n2\t1\t3\n").unwrap();
        fs::write(dir.join(EDGES_FILE), "edge_type\tsrc\tdst\nzeta\t0\t1\nalpha\t1\t2\nzeta\t2\t0\n").unwrap();
        let g = load_graph(&dir).unwrap();
        assert_eq!(g.edge_type_names(), &["zeta".to_string(), "alpha".to_string()]);
        assert_eq!(g.edges(0), &[(0, 1), (0, 2)]);
    }

    #[test]
    fn malformed_row_reports_line_number() {
        let dir = tmpdir("malformed");
        fs::write(dir.join(NODES_FILE), "node_id\tis_issuer\tf0\n0\t1\t1.5\n1\t0\tabc\n").unwrap();
        fs::write(dir.join(EDGES_FILE), "edge_type\tsrc\tdst\n").unwrap();
        match load_graph(&dir) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn node_table_round_trip() {
        let dir = tmpdir("table");
        let t = NodeTable::new(vec![4, 0, 9], Matrix::from_fn(3, 2, |i, j| 0.1 * (i * 7 + j) as f64)).unwrap();
        let path = dir.join("t.tsv");
        save_node_table(&t, "t", &path).unwrap();
        let back = load_node_table(&path, "t").unwrap();
        assert_eq!(t, back);
        assert_eq!(back.get(9), Some(t.values().row(2)));
        assert!(back.get(1).is_none());
    }

    #[test]
    fn events_reject_duplicates() {
        let dir = tmpdir("events");
        let path = dir.join(EVENTS_FILE);
        fs::write(&path, "node_id\tdefault_time\n1\t0\n1\t2\n").unwrap();
        assert!(load_events(&path, 3).is_err());
    }

    #[test]
    fn model_log_and_metrics_round_trip() {
        let dir = tmpdir("model");
        let model = LogisticModel {
            standardizer: Standardizer {
                mean: vec![0.1, -2.0 / 3.0],
                std: vec![1.0, 0.3],
            },
            weights: vec![1.0 / 7.0, -5e-20],
            bias: 0.25,
            final_loss: 0.6931,
        };
        let p = dir.join("model.tsv");
        save_logistic_model(&model, &p).unwrap();
        assert_eq!(load_logistic_model(&p).unwrap(), model);

        let log = vec![EpochLog {
            epoch: 1,
            loss_total: 1.0 / 3.0,
            loss_full: 0.2,
            loss_sub_mean: 0.1,
        }];
        let p = dir.join("log.tsv");
        save_pretrain_log(&log, &p).unwrap();
        assert_eq!(load_pretrain_log(&p).unwrap(), log);

        let m = Metrics {
            micro_f1: 0.75,
            accuracy: 0.75,
            auc: 2.0 / 3.0,
        };
        let p = dir.join("metrics.tsv");
        save_metrics(Condition::Ablation, 4, &m, &p).unwrap();
        assert_eq!(load_metrics(&p).unwrap(), (Condition::Ablation, 4, m));
    }
}
