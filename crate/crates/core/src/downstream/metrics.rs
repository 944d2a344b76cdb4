//! Classification metrics for binary pair labels.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub micro_f1: f64,
    pub accuracy: f64,
    pub auc: f64,
}

/// Micro-averaged F1 over both classes: TP, FP and FN pooled across the
/// classes before computing F1. With one label per sample this coincides with
/// accuracy.
pub fn micro_f1(labels: &[u8], predictions: &[u8]) -> f64 {
    assert_eq!(labels.len(), predictions.len());
    let (mut tp, mut fp, mut fn_) = (0usize, 0usize, 0usize);
    for class in [0u8, 1] {
        for (&y, &p) in labels.iter().zip(predictions) {
            match (y == class, p == class) {
                (true, true) => tp += 1,
                (false, true) => fp += 1,
                (true, false) => fn_ += 1,
                (false, false) => {}
            }
        }
    }
    let denom = 2 * tp + fp + fn_;
    if denom == 0 {
        return 0.0;
    }
    (2 * tp) as f64 / denom as f64
}

pub fn accuracy(labels: &[u8], predictions: &[u8]) -> f64 {
    assert_eq!(labels.len(), predictions.len());
    if labels.is_empty() {
        return 0.0;
    }
    let correct = labels.iter().zip(predictions).filter(|(a, b)| a == b).count();
    correct as f64 / labels.len() as f64
}

/// ROC AUC as the Mann-Whitney statistic: the fraction of (positive,
/// negative) pairs ranked correctly, ties counting one half. NaN when either
/// class is absent.
pub fn auc(labels: &[u8], scores: &[f64]) -> f64 {
    assert_eq!(labels.len(), scores.len());
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let (mut pos, mut neg) = (0usize, 0usize);
    // twice the number of correctly ordered pairs, kept integral
    let mut twice_correct = 0usize;
    let mut start = 0;
    while start < order.len() {
        let mut end = start;
        while end < order.len() && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        let group_pos = order[start..end].iter().filter(|&&i| labels[i] == 1).count();
        let group_neg = end - start - group_pos;
        twice_correct += 2 * group_pos * neg + group_pos * group_neg;
        pos += group_pos;
        neg += group_neg;
        start = end;
    }
    if pos == 0 || neg == 0 {
        return f64::NAN;
    }
    (twice_correct as f64 / 2.0) / (pos * neg) as f64
}

/// Thresholds probabilities at 0.5.
pub fn evaluate_scores(labels: &[u8], scores: &[f64]) -> Metrics {
    let preds: Vec<u8> = scores.iter().map(|&s| u8::from(s >= 0.5)).collect();
    Metrics {
        micro_f1: micro_f1(labels, &preds),
        accuracy: accuracy(labels, &preds),
        auc: auc(labels, scores),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_correct() {
        let y = [1, 0, 1, 1, 0];
        assert_eq!(micro_f1(&y, &y), 1.0);
        assert_eq!(accuracy(&y, &y), 1.0);
    }

    #[test]
    fn one_miss_in_four() {
        let y = [1, 1, 0, 0];
        let p = [1, 0, 0, 0];
        assert_eq!(micro_f1(&y, &p), 0.75);
        assert_eq!(accuracy(&y, &p), 0.75);
    }

    #[test]
    fn perfect_ranking_auc() {
        assert_eq!(auc(&[1, 0, 1, 0], &[0.9, 0.4, 0.6, 0.1]), 1.0);
    }

    #[test]
    fn ties_count_half() {
        assert_eq!(auc(&[1, 0], &[0.5, 0.5]), 0.5);
        assert!(auc(&[1, 1], &[0.2, 0.3]).is_nan());
    }
}
