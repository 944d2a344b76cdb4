use crate::error::{Error, Result};
use crate::io::NodeTable;
use crate::pairs::PropagationPair;
use crate::tensor::Matrix;

/// `X^m = X^t ‖ X^p` for one node; `embeddings = None` gives `X^t` alone.
fn node_fusion(node: usize, task: &NodeTable, embeddings: Option<&NodeTable>, out: &mut Vec<f64>) -> Result<()> {
    let t = task.get(node).ok_or(Error::MissingRow {
        what: "task feature",
        node,
    })?;
    out.extend_from_slice(t);
    if let Some(emb) = embeddings {
        let p = emb.get(node).ok_or(Error::MissingRow { what: "embedding", node })?;
        out.extend_from_slice(p);
    }
    Ok(())
}

/// Merged classifier input `[X^t_s ‖ X^p_s ‖ X^t_t ‖ X^p_t]`.
pub fn build_fusion(pair: &PropagationPair, task: &NodeTable, embeddings: Option<&NodeTable>) -> Result<Vec<f64>> {
    let width = 2 * (task.dim() + embeddings.map_or(0, NodeTable::dim));
    let mut out = Vec::with_capacity(width);
    node_fusion(pair.source_id, task, embeddings, &mut out)?;
    node_fusion(pair.target_id, task, embeddings, &mut out)?;
    Ok(out)
}

/// Stacked fusion vectors and labels for a list of pairs.
pub fn fusion_matrix(
    pairs: &[PropagationPair],
    task: &NodeTable,
    embeddings: Option<&NodeTable>,
) -> Result<(Matrix, Vec<u8>)> {
    let width = 2 * (task.dim() + embeddings.map_or(0, NodeTable::dim));
    let mut values = Vec::with_capacity(pairs.len() * width);
    for p in pairs {
        values.extend(build_fusion(p, task, embeddings)?);
    }
    let labels = pairs.iter().map(|p| p.label).collect();
    Ok((Matrix::from_vec(pairs.len(), width, values)?, labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(s: usize, t: usize) -> PropagationPair {
        PropagationPair {
            source_id: s,
            target_id: t,
            label: 1,
            hop_distance: 1,
        }
    }

    fn task() -> NodeTable {
        NodeTable::new(vec![3, 5], Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap()).unwrap()
    }

    #[test]
    fn merged_length_and_order() {
        let emb = NodeTable::dense(Matrix::from_fn(6, 3, |i, j| (10 * i + j) as f64));
        let v = build_fusion(&pair(3, 5), &task(), Some(&emb)).unwrap();
        assert_eq!(v.len(), 10);
        assert_eq!(v, vec![1.0, 2.0, 30.0, 31.0, 32.0, 3.0, 4.0, 50.0, 51.0, 52.0]);
    }

    #[test]
    fn zero_embeddings_leave_task_parts() {
        let emb = NodeTable::dense(Matrix::zeros(6, 3));
        let v = build_fusion(&pair(3, 5), &task(), Some(&emb)).unwrap();
        assert_eq!(v, vec![1.0, 2.0, 0.0, 0.0, 0.0, 3.0, 4.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn swapping_endpoints_changes_the_vector() {
        let a = build_fusion(&pair(3, 5), &task(), None).unwrap();
        let b = build_fusion(&pair(5, 3), &task(), None).unwrap();
        assert_ne!(a, b);
        assert_eq!(a[..2], b[2..]);
    }

    #[test]
    fn missing_rows_name_the_node() {
        let err = build_fusion(&pair(3, 4), &task(), None).unwrap_err();
        assert!(matches!(err, Error::MissingRow { node: 4, .. }));
        let emb = NodeTable::dense(Matrix::zeros(4, 1));
        let err = build_fusion(&pair(3, 5), &task(), Some(&emb)).unwrap_err();
        assert!(matches!(err, Error::MissingRow { what: "embedding", node: 5 }));
    }
}
