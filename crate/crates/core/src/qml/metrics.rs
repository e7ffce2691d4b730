use super::QmlError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    /// `None` when only one class is present.
    pub auc: Option<f64>,
    pub accuracy: f64,
    pub balanced_accuracy: f64,
    pub f1: f64,
}

/// Mann-Whitney AUC with half credit for ties, plus confusion-matrix
/// metrics at `score >= threshold`.
pub fn classification_metrics(y_true: &[u8], scores: &[f64], threshold: f64) -> Result<Metrics, QmlError> {
    if y_true.len() != scores.len() {
        return Err(QmlError::LengthMismatch {
            expected: y_true.len(),
            got: scores.len(),
        });
    }
    if y_true.is_empty() {
        return Err(QmlError::TooFewRows { needed: 1, got: 0 });
    }
    if let Some(&bad) = y_true.iter().find(|&&v| v > 1) {
        return Err(QmlError::InvalidLabel(bad as f64));
    }
    let (mut tp, mut tn, mut fp, mut fnn) = (0u64, 0u64, 0u64, 0u64);
    for (&t, &s) in y_true.iter().zip(scores) {
        match (t == 1, s >= threshold) {
            (true, true) => tp += 1,
            (true, false) => fnn += 1,
            (false, true) => fp += 1,
            (false, false) => tn += 1,
        }
    }
    let pos = tp + fnn;
    let neg = tn + fp;
    let n = (pos + neg) as f64;
    let accuracy = (tp + tn) as f64 / n;
    let balanced_accuracy = if pos > 0 && neg > 0 {
        (tp * neg + tn * pos) as f64 / (2 * pos * neg) as f64
    } else {
        accuracy
    };
    let f1_den = 2 * tp + fp + fnn;
    let f1 = if f1_den > 0 {
        (2 * tp) as f64 / f1_den as f64
    } else {
        0.0
    };
    Ok(Metrics {
        auc: auc(y_true, scores, pos, neg),
        accuracy,
        balanced_accuracy,
        f1,
    })
}

fn auc(y: &[u8], scores: &[f64], pos: u64, neg: u64) -> Option<f64> {
    if pos == 0 || neg == 0 {
        return None;
    }
    let mut order: Vec<usize> = (0..y.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // midranks, 1-based
    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let mid = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            if y[k] == 1 {
                rank_sum_pos += mid;
            }
        }
        i = j + 1;
    }
    let p = pos as f64;
    Some((rank_sum_pos - p * (p + 1.0) / 2.0) / (p * neg as f64))
}
