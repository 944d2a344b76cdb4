//! Reverse-mode tape over dense matrices, restricted to the operations the
//! masked autoencoder needs.
//!
//! Every forward op checks its output for non-finite values. Reductions run
//! in a fixed order (rows ascending, neighbors ascending) so repeated runs
//! are bit-identical.

use std::rc::Rc;

use crate::error::{Error, Result};
use crate::tensor::{dot, norm, Matrix};

/// Handle to a value recorded on a [`Tape`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Var(usize);

#[derive(Debug)]
enum Op {
    Leaf,
    /// `x · wᵀ`
    MatMulT { x: Var, w: Var },
    /// Single-head GAT aggregation over `neighbors` (self-loops included).
    Attention {
        z: Var,
        attn: Var,
        slope: f64,
        neighbors: Rc<Vec<Vec<usize>>>,
        /// Pre-activation scores and softmax weights, per node, aligned with
        /// `neighbors[i]`.
        scores: Vec<Vec<f64>>,
        alpha: Vec<Vec<f64>>,
    },
    ConcatCols(Vec<Var>),
    Mean(Vec<Var>),
    Elu(Var),
    /// Rows listed in `rows` replaced by the single-row `token`.
    ReplaceRows { x: Var, token: Var, rows: Vec<usize> },
    /// Scaled cosine error against a constant target over `rows`.
    Sce {
        target: Matrix,
        z: Var,
        rows: Vec<usize>,
        gamma: f64,
    },
    WeightedSum(Vec<(Var, f64)>),
    Sum(Var),
}

#[derive(Debug)]
struct Node {
    value: Matrix,
    op: Op,
}

#[derive(Debug, Default)]
pub struct Tape {
    nodes: Vec<Node>,
    zero_norm_rows: usize,
}

fn checked(m: Matrix, op: &'static str) -> Result<Matrix> {
    if m.is_finite() {
        Ok(m)
    } else {
        Err(Error::NumericFault { op })
    }
}

#[inline]
fn leaky_relu(x: f64, slope: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        slope * x
    }
}

/// Value and per-row gradient factor of one SCE term.
///
/// Returns `None` when either row has zero norm.
fn sce_term(x: &[f64], z: &[f64], gamma: f64) -> Option<(f64, f64, f64)> {
    let nx = norm(x);
    let nz = norm(z);
    if nx == 0.0 || nz == 0.0 {
        return None;
    }
    let cos = dot(x, z) / (nx * nz);
    let base = (1.0 - cos).max(0.0);
    Some((base.powf(gamma), cos, base))
}

/// Scaled cosine error `mean_{i in rows} (1 - cos(x_i, z_i))^gamma`.
///
/// A row where `x_i` or `z_i` has zero norm contributes the maximum penalty
/// `1` and is counted in the second return value.
pub fn sce_loss(x: &Matrix, z: &Matrix, rows: &[usize], gamma: f64) -> (f64, usize) {
    if rows.is_empty() {
        return (0.0, 0);
    }
    let mut total = 0.0;
    let mut zero_norm = 0;
    for &i in rows {
        match sce_term(x.row(i), z.row(i), gamma) {
            Some((v, _, _)) => total += v,
            None => {
                total += 1.0;
                zero_norm += 1;
            }
        }
    }
    (total / rows.len() as f64, zero_norm)
}

impl Tape {
    pub fn new() -> Self {
        Tape::default()
    }

    fn push(&mut self, value: Matrix, op: Op) -> Var {
        self.nodes.push(Node { value, op });
        Var(self.nodes.len() - 1)
    }

    pub fn leaf(&mut self, value: Matrix) -> Var {
        self.push(value, Op::Leaf)
    }

    pub fn value(&self, v: Var) -> &Matrix {
        &self.nodes[v.0].value
    }

    pub fn scalar(&self, v: Var) -> f64 {
        let m = self.value(v);
        debug_assert_eq!(m.shape(), (1, 1));
        m.get(0, 0)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Zero-norm rows met by SCE ops recorded on this tape.
    pub fn zero_norm_rows(&self) -> usize {
        self.zero_norm_rows
    }

    pub fn matmul_t(&mut self, x: Var, w: Var) -> Result<Var> {
        let out = checked(self.value(x).matmul_t(self.value(w)), "linear")?;
        Ok(self.push(out, Op::MatMulT { x, w }))
    }

    /// `out_i = Σ_j α_ij z_j` with `α_i = softmax_j(LeakyReLU(a_l·z_i + a_r·z_j))`
    /// over `neighbors[i]`, where `attn = [a_l ‖ a_r]` is `[1 × 2d]`.
    pub fn attention(
        &mut self,
        z: Var,
        attn: Var,
        neighbors: &Rc<Vec<Vec<usize>>>,
        slope: f64,
    ) -> Result<Var> {
        let zm = self.value(z);
        let am = self.value(attn);
        let (n, d) = zm.shape();
        if am.shape() != (1, 2 * d) {
            return Err(Error::Shape(format!(
                "attention vector {:?} for head width {d}",
                am.shape()
            )));
        }
        if neighbors.len() != n {
            return Err(Error::Shape(format!("{} neighbor lists for {n} nodes", neighbors.len())));
        }
        let (a_l, a_r) = am.row(0).split_at(d);
        let left: Vec<f64> = (0..n).map(|i| dot(a_l, zm.row(i))).collect();
        let right: Vec<f64> = (0..n).map(|i| dot(a_r, zm.row(i))).collect();

        let mut out = Matrix::zeros(n, d);
        let mut scores = Vec::with_capacity(n);
        let mut alphas = Vec::with_capacity(n);
        for i in 0..n {
            let nbrs = &neighbors[i];
            let s: Vec<f64> = nbrs.iter().map(|&j| left[i] + right[j]).collect();
            let e: Vec<f64> = s.iter().map(|&v| leaky_relu(v, slope)).collect();
            let max = e.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let w: Vec<f64> = e.iter().map(|&v| (v - max).exp()).collect();
            let total: f64 = w.iter().sum();
            let alpha: Vec<f64> = w.iter().map(|&v| v / total).collect();
            let row = out.row_mut(i);
            for (&j, &a) in nbrs.iter().zip(&alpha) {
                for (o, zj) in row.iter_mut().zip(zm.row(j)) {
                    *o += a * zj;
                }
            }
            scores.push(s);
            alphas.push(alpha);
        }
        let out = checked(out, "gat attention")?;
        Ok(self.push(
            out,
            Op::Attention {
                z,
                attn,
                slope,
                neighbors: Rc::clone(neighbors),
                scores,
                alpha: alphas,
            },
        ))
    }

    pub fn concat_cols(&mut self, parts: &[Var]) -> Result<Var> {
        let rows = self.value(parts[0]).rows();
        let cols: usize = parts.iter().map(|&p| self.value(p).cols()).sum();
        let mut out = Matrix::zeros(rows, cols);
        for i in 0..rows {
            let mut off = 0;
            for &p in parts {
                let src = self.value(p).row(i);
                out.row_mut(i)[off..off + src.len()].copy_from_slice(src);
                off += src.len();
            }
        }
        Ok(self.push(out, Op::ConcatCols(parts.to_vec())))
    }

    pub fn mean(&mut self, parts: &[Var]) -> Result<Var> {
        let mut out = self.value(parts[0]).clone();
        for &p in &parts[1..] {
            out.add_assign(self.value(p));
        }
        let k = parts.len() as f64;
        out.as_mut_slice().iter_mut().for_each(|v| *v /= k);
        Ok(self.push(out, Op::Mean(parts.to_vec())))
    }

    pub fn elu(&mut self, x: Var) -> Result<Var> {
        let mut out = self.value(x).clone();
        for v in out.as_mut_slice() {
            if *v <= 0.0 {
                *v = v.exp_m1();
            }
        }
        let out = checked(out, "elu")?;
        Ok(self.push(out, Op::Elu(x)))
    }

    pub fn replace_rows(&mut self, x: Var, token: Var, rows: &[usize]) -> Result<Var> {
        let tok = self.value(token);
        let mut out = self.value(x).clone();
        if tok.shape() != (1, out.cols()) {
            return Err(Error::Shape(format!(
                "token {:?} for rows of width {}",
                tok.shape(),
                out.cols()
            )));
        }
        for &i in rows {
            out.row_mut(i).copy_from_slice(tok.row(0));
        }
        Ok(self.push(
            out,
            Op::ReplaceRows {
                x,
                token,
                rows: rows.to_vec(),
            },
        ))
    }

    pub fn sce(&mut self, target: &Matrix, z: Var, rows: &[usize], gamma: f64) -> Result<Var> {
        if target.shape() != self.value(z).shape() {
            return Err(Error::Shape(format!(
                "sce target {:?} vs reconstruction {:?}",
                target.shape(),
                self.value(z).shape()
            )));
        }
        let (loss, zero) = sce_loss(target, self.value(z), rows, gamma);
        self.zero_norm_rows += zero;
        let out = checked(Matrix::from_vec(1, 1, vec![loss])?, "sce")?;
        Ok(self.push(
            out,
            Op::Sce {
                target: target.clone(),
                z,
                rows: rows.to_vec(),
                gamma,
            },
        ))
    }

    /// `Σ w_i · s_i` over scalar vars.
    pub fn weighted_sum(&mut self, terms: &[(Var, f64)]) -> Result<Var> {
        let total = terms.iter().map(|&(v, w)| w * self.scalar(v)).sum();
        let out = checked(Matrix::from_vec(1, 1, vec![total])?, "weighted sum")?;
        Ok(self.push(out, Op::WeightedSum(terms.to_vec())))
    }

    /// Sum of every entry, as a scalar.
    pub fn sum(&mut self, x: Var) -> Result<Var> {
        let total = self.value(x).as_slice().iter().sum();
        let out = checked(Matrix::from_vec(1, 1, vec![total])?, "sum")?;
        Ok(self.push(out, Op::Sum(x)))
    }

    /// Gradients of the scalar `root` with respect to every recorded value.
    pub fn backward(&self, root: Var) -> Result<Gradients> {
        let mut grads: Vec<Option<Matrix>> = vec![None; self.nodes.len()];
        grads[root.0] = Some(Matrix::from_vec(1, 1, vec![1.0])?);

        fn acc(grads: &mut [Option<Matrix>], v: Var, g: Matrix) {
            match &mut grads[v.0] {
                Some(existing) => existing.add_assign(&g),
                slot @ None => *slot = Some(g),
            }
        }

        for idx in (0..=root.0).rev() {
            let Some(g) = grads[idx].take() else {
                continue;
            };
            let node = &self.nodes[idx];
            match &node.op {
                Op::Leaf => {
                    grads[idx] = Some(g);
                    continue;
                }
                Op::MatMulT { x, w } => {
                    let xm = self.value(*x);
                    let wm = self.value(*w);
                    let mut gx = Matrix::zeros(xm.rows(), xm.cols());
                    let mut gw = Matrix::zeros(wm.rows(), wm.cols());
                    for i in 0..xm.rows() {
                        let gi = g.row(i);
                        for (o, &go) in gi.iter().enumerate() {
                            if go == 0.0 {
                                continue;
                            }
                            let wrow = wm.row(o);
                            for (a, &b) in gx.row_mut(i).iter_mut().zip(wrow) {
                                *a += go * b;
                            }
                            let xrow = xm.row(i);
                            for (a, &b) in gw.row_mut(o).iter_mut().zip(xrow) {
                                *a += go * b;
                            }
                        }
                    }
                    acc(&mut grads, *x, gx);
                    acc(&mut grads, *w, gw);
                }
                Op::Attention {
                    z,
                    attn,
                    slope,
                    neighbors,
                    scores,
                    alpha,
                } => {
                    let zm = self.value(*z);
                    let (n, d) = zm.shape();
                    let am = self.value(*attn);
                    let (a_l, a_r) = am.row(0).split_at(d);
                    let mut gz = Matrix::zeros(n, d);
                    let mut ga = Matrix::zeros(1, 2 * d);
                    for i in 0..n {
                        let gi = g.row(i);
                        let nbrs = &neighbors[i];
                        let al = &alpha[i];
                        // out_i = Σ α_ij z_j
                        let dalpha: Vec<f64> = nbrs.iter().map(|&j| dot(gi, zm.row(j))).collect();
                        for (&j, &a) in nbrs.iter().zip(al) {
                            for (t, &v) in gz.row_mut(j).iter_mut().zip(gi) {
                                *t += a * v;
                            }
                        }
                        // softmax
                        let inner: f64 = al.iter().zip(&dalpha).map(|(a, b)| a * b).sum();
                        for (k, &j) in nbrs.iter().enumerate() {
                            let de = al[k] * (dalpha[k] - inner);
                            let ds = if scores[i][k] > 0.0 { de } else { slope * de };
                            if ds == 0.0 {
                                continue;
                            }
                            let (ga_l, ga_r) = ga.row_mut(0).split_at_mut(d);
                            for (t, &v) in ga_l.iter_mut().zip(zm.row(i)) {
                                *t += ds * v;
                            }
                            for (t, &v) in ga_r.iter_mut().zip(zm.row(j)) {
                                *t += ds * v;
                            }
                            for (t, &v) in gz.row_mut(i).iter_mut().zip(a_l) {
                                *t += ds * v;
                            }
                            for (t, &v) in gz.row_mut(j).iter_mut().zip(a_r) {
                                *t += ds * v;
                            }
                        }
                    }
                    acc(&mut grads, *z, gz);
                    acc(&mut grads, *attn, ga);
                }
                Op::ConcatCols(parts) => {
                    let mut off = 0;
                    for &p in parts {
                        let c = self.value(p).cols();
                        let gp = Matrix::from_fn(g.rows(), c, |i, j| g.get(i, off + j));
                        off += c;
                        acc(&mut grads, p, gp);
                    }
                }
                Op::Mean(parts) => {
                    let k = parts.len() as f64;
                    for &p in parts {
                        let mut gp = g.clone();
                        gp.as_mut_slice().iter_mut().for_each(|v| *v /= k);
                        acc(&mut grads, p, gp);
                    }
                }
                Op::Elu(x) => {
                    let xm = self.value(*x);
                    let y = &node.value;
                    let mut gx = g.clone();
                    for ((t, &xv), &yv) in gx.as_mut_slice().iter_mut().zip(xm.as_slice()).zip(y.as_slice()) {
                        if xv <= 0.0 {
                            *t *= yv + 1.0;
                        }
                    }
                    acc(&mut grads, *x, gx);
                }
                Op::ReplaceRows { x, token, rows } => {
                    let mut gx = g.clone();
                    let mut gt = Matrix::zeros(1, g.cols());
                    for &i in rows {
                        for (t, &v) in gt.row_mut(0).iter_mut().zip(g.row(i)) {
                            *t += v;
                        }
                    }
                    for &i in rows {
                        gx.row_mut(i).fill(0.0);
                    }
                    acc(&mut grads, *x, gx);
                    acc(&mut grads, *token, gt);
                }
                Op::Sce {
                    target,
                    z,
                    rows,
                    gamma,
                } => {
                    let zm = self.value(*z);
                    let upstream = g.get(0, 0);
                    let mut gz = Matrix::zeros(zm.rows(), zm.cols());
                    let m = rows.len() as f64;
                    for &i in rows {
                        let x = target.row(i);
                        let zr = zm.row(i);
                        let Some((_, cos, base)) = sce_term(x, zr, *gamma) else {
                            continue;
                        };
                        // d/dz (1 - cos)^γ = -γ (1 - cos)^{γ-1} dcos/dz
                        let outer = if *gamma == 1.0 {
                            1.0
                        } else {
                            gamma * base.powf(gamma - 1.0)
                        };
                        let nx = norm(x);
                        let nz = norm(zr);
                        let coef = -upstream * outer / m;
                        for ((t, &xv), &zv) in gz.row_mut(i).iter_mut().zip(x).zip(zr) {
                            *t += coef * (xv / (nx * nz) - cos * zv / (nz * nz));
                        }
                    }
                    acc(&mut grads, *z, gz);
                }
                Op::Sum(x) => {
                        let xm = self.value(*x);
                        let mut gx = Matrix::zeros(xm.rows(), xm.cols());
                        gx.fill(g.get(0, 0));
                        acc(&mut grads, *x, gx);
                    }
                Op::WeightedSum(terms) => {
                    let up = g.get(0, 0);
                    for &(v, w) in terms {
                        acc(&mut grads, v, Matrix::from_vec(1, 1, vec![up * w])?);
                    }
                }
            }
        }
        for (i, g) in grads.iter().enumerate() {
            if let Some(g) = g {
                if !g.is_finite() {
                    return Err(Error::NumericFault { op: op_name(&self.nodes[i].op) });
                }
            }
        }
        Ok(Gradients { grads })
    }
}

fn op_name(op: &Op) -> &'static str {
    match op {
        Op::Leaf => "leaf gradient",
        Op::MatMulT { .. } => "linear backward",
        Op::Attention { .. } => "gat attention backward",
        Op::ConcatCols(_) => "concat backward",
        Op::Mean(_) => "mean backward",
        Op::Elu(_) => "elu backward",
        Op::ReplaceRows { .. } => "mask backward",
        Op::Sce { .. } => "sce backward",
        Op::WeightedSum(_) => "weighted sum backward",
        Op::Sum(_) => "sum backward",
    }
}

#[derive(Debug)]
pub struct Gradients {
    grads: Vec<Option<Matrix>>,
}

impl Gradients {
    /// Gradient for `v`, or `None` if `v` does not influence the root.
    pub fn get(&self, v: Var) -> Option<&Matrix> {
        self.grads[v.0].as_ref()
    }

    /// Gradient for `v`, zeros shaped like `like` if it does not influence
    /// the root.
    pub fn get_or_zeros(&self, v: Var, like: &Matrix) -> Matrix {
        self.get(v)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(like.rows(), like.cols()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<f64>]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn sce_hand_value() {
        let x = m(&[vec![1.0, 0.0], vec![0.0, 1.0]]);
        let z = m(&[vec![1.0, 1.0], vec![0.0, 2.0]]);
        let (loss, zero) = sce_loss(&x, &z, &[0, 1], 1.0);
        assert_eq!(zero, 0);
        let expected = (1.0 - 1.0 / 2f64.sqrt()) / 2.0;
        assert!((loss - expected).abs() < 1e-15);
        assert!((loss - 0.146447).abs() < 1e-6);
    }

    #[test]
    fn sce_scale_invariant_and_orthogonal() {
        let x = m(&[vec![1.0, 2.0], vec![-1.0, 0.5]]);
        let z = m(&[vec![3.0, 6.0], vec![-0.1, 0.05]]);
        assert!(sce_loss(&x, &z, &[0, 1], 1.0).0.abs() < 1e-15);
        let z = m(&[vec![-2.0, 1.0], vec![0.5, 1.0]]);
        assert!((sce_loss(&x, &z, &[0, 1], 1.0).0 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sce_zero_norm_is_max_penalty() {
        let x = m(&[vec![1.0, 0.0], vec![0.0, 0.0]]);
        let z = m(&[vec![1.0, 0.0], vec![1.0, 1.0]]);
        let (loss, zero) = sce_loss(&x, &z, &[0, 1], 2.0);
        assert_eq!(zero, 1);
        assert!((loss - 0.5).abs() < 1e-15);
    }

    #[test]
    fn sce_of_identical_inputs_has_zero_gradient() {
        let x = m(&[vec![1.0, -2.0, 0.5], vec![0.3, 0.3, 0.1]]);
        let mut tape = Tape::new();
        let z = tape.leaf(x.clone());
        let loss = tape.sce(&x, z, &[0, 1], 1.0).unwrap();
        let g = tape.backward(loss).unwrap();
        assert!(g.get(z).unwrap().as_slice().iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn linear_sum_gradient_is_column_sums() {
        let x = m(&[vec![1.0, 2.0], vec![3.0, -1.0], vec![0.5, 0.5]]);
        let w = m(&[vec![0.1, 0.2], vec![-0.3, 0.4]]);
        let mut tape = Tape::new();
        let xv = tape.leaf(x);
        let wv = tape.leaf(w);
        let y = tape.matmul_t(xv, wv).unwrap();
        let s = tape.sum(y).unwrap();
        let g = tape.backward(s).unwrap();
        let gw = g.get(wv).unwrap();
        for o in 0..2 {
            assert_eq!(gw.row(o), &[4.5, 1.5]);
        }
    }

    #[test]
    fn attention_rows_sum_to_one() {
        let mut tape = Tape::new();
        let z = tape.leaf(Matrix::from_fn(4, 3, |i, j| ((i * 3 + j) as f64 * 0.7).sin()));
        let a = tape.leaf(Matrix::from_fn(1, 6, |_, j| 0.3 * j as f64 - 0.8));
        let nbrs = Rc::new(vec![vec![0, 1], vec![0, 1, 2], vec![1, 2, 3], vec![2, 3]]);
        tape.attention(z, a, &nbrs, 0.2).unwrap();
        if let Op::Attention { alpha, .. } = &tape.nodes.last().unwrap().op {
            for row in alpha {
                assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
        } else {
            unreachable!();
        }
    }

    #[test]
    fn non_finite_forward_is_a_fault() {
        let mut tape = Tape::new();
        let x = tape.leaf(Matrix::from_vec(1, 1, vec![1e300]).unwrap());
        let w = tape.leaf(Matrix::from_vec(1, 1, vec![1e300]).unwrap());
        assert!(matches!(tape.matmul_t(x, w), Err(Error::NumericFault { .. })));
    }
}
