//! L2-regularized logistic regression on standardized inputs, trained by
//! full-batch gradient descent.

use crate::error::{Error, Result};
use crate::tensor::{dot, Matrix};

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticConfig {
    pub l2: f64,
    pub iterations: usize,
    pub lr: f64,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        LogisticConfig {
            l2: 1e-3,
            iterations: 500,
            lr: 0.1,
        }
    }
}

/// Per-column mean and standard deviation from the training rows only.
/// Constant columns get a scale of 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Standardizer {
    pub fn fit(x: &Matrix) -> Self {
        let (n, d) = x.shape();
        let mut mean = vec![0.0; d];
        for i in 0..n {
            for (m, v) in mean.iter_mut().zip(x.row(i)) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n.max(1) as f64);
        let mut var = vec![0.0; d];
        for i in 0..n {
            for ((s, v), m) in var.iter_mut().zip(x.row(i)).zip(&mean) {
                *s += (v - m) * (v - m);
            }
        }
        let std = var
            .into_iter()
            .map(|s| {
                let sd = (s / n.max(1) as f64).sqrt();
                if sd > 1e-12 {
                    sd
                } else {
                    1.0
                }
            })
            .collect();
        Standardizer { mean, std }
    }

    pub fn transform(&self, x: &Matrix) -> Matrix {
        Matrix::from_fn(x.rows(), x.cols(), |i, j| (x.get(i, j) - self.mean[j]) / self.std[j])
    }
}

fn sigmoid(v: f64) -> f64 {
    if v >= 0.0 {
        1.0 / (1.0 + (-v).exp())
    } else {
        let e = v.exp();
        e / (1.0 + e)
    }
}

/// Mean log-loss plus `l2/2·‖w‖²` (bias unpenalized), and its gradient with
/// respect to `(w, b)`.
pub fn loss_and_grad(x: &Matrix, y: &[u8], w: &[f64], b: f64, l2: f64) -> (f64, Vec<f64>, f64) {
    let n = x.rows() as f64;
    let mut loss = 0.0;
    let mut gw = vec![0.0; w.len()];
    let mut gb = 0.0;
    for (i, &label) in y.iter().enumerate() {
        let row = x.row(i);
        let logit = dot(row, w) + b;
        let target = f64::from(label);
        // log(1 + e^z) - t·z, computed stably
        loss += logit.max(0.0) + (-logit.abs()).exp().ln_1p() - target * logit;
        let r = sigmoid(logit) - target;
        for (g, v) in gw.iter_mut().zip(row) {
            *g += r * v;
        }
        gb += r;
    }
    loss /= n;
    gb /= n;
    for (g, wv) in gw.iter_mut().zip(w) {
        *g = *g / n + l2 * wv;
    }
    loss += 0.5 * l2 * dot(w, w);
    (loss, gw, gb)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticModel {
    pub standardizer: Standardizer,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub final_loss: f64,
}

impl LogisticModel {
    pub fn fit(x: &Matrix, y: &[u8], cfg: &LogisticConfig) -> Result<Self> {
        if x.rows() == 0 || x.rows() != y.len() {
            return Err(Error::Shape(format!("{} rows, {} labels", x.rows(), y.len())));
        }
        let standardizer = Standardizer::fit(x);
        let xs = standardizer.transform(x);
        let mut w = vec![0.0; x.cols()];
        let mut b = 0.0;
        let mut loss = f64::NAN;
        for _ in 0..cfg.iterations {
            let (l, gw, gb) = loss_and_grad(&xs, y, &w, b, cfg.l2);
            if !l.is_finite() {
                return Err(Error::NumericFault { op: "logistic loss" });
            }
            loss = l;
            for (wv, g) in w.iter_mut().zip(&gw) {
                *wv -= cfg.lr * g;
            }
            b -= cfg.lr * gb;
        }
        if cfg.iterations > 0 {
            loss = loss_and_grad(&xs, y, &w, b, cfg.l2).0;
        }
        Ok(LogisticModel {
            standardizer,
            weights: w,
            bias: b,
            final_loss: loss,
        })
    }

    pub fn predict_proba(&self, x: &Matrix) -> Vec<f64> {
        let xs = self.standardizer.transform(x);
        (0..xs.rows())
            .map(|i| sigmoid(dot(xs.row(i), &self.weights) + self.bias))
            .collect()
    }
}
