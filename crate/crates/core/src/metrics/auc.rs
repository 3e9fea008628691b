use super::MetricError;

fn check(scores: &[f64], labels: &[bool]) -> Result<(usize, usize), MetricError> {
    if scores.len() != labels.len() {
        return Err(MetricError::LengthMismatch {
            scores: scores.len(),
            labels: labels.len(),
        });
    }
    if let Some(i) = scores.iter().position(|s| s.is_nan()) {
        return Err(MetricError::NanScore(i));
    }
    let positives = labels.iter().filter(|&&l| l).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(MetricError::SingleClass {
            positives,
            negatives,
        });
    }
    Ok((positives, negatives))
}

/// Area under the ROC curve, `label == true` meaning positive (fake).
///
/// Computed through the Mann-Whitney rank sum with mid-ranks for ties, which
/// equals `(wins + ties / 2) / (n_pos * n_neg)` over all positive/negative
/// pairs.
pub fn roc_auc(scores: &[f64], labels: &[bool]) -> Result<f64, MetricError> {
    let (n_pos, n_neg) = check(scores, labels)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // Twice the positive rank sum, kept integral so ties stay exact.
    let mut rank_sum_x2: u128 = 0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            j += 1;
        }
        // Ranks i+1..=j share the midrank (i + 1 + j) / 2.
        let midrank_x2 = (i + 1 + j) as u128;
        let pos_in_tie = order[i..j].iter().filter(|&&k| labels[k]).count() as u128;
        rank_sum_x2 += midrank_x2 * pos_in_tie;
        i = j;
    }
    let n_pos = n_pos as u128;
    let u_x2 = rank_sum_x2 - n_pos * (n_pos + 1);
    Ok(u_x2 as f64 / (2 * n_pos * n_neg as u128) as f64)
}

/// O(n^2) pair-counting definition; kept as the reference route.
pub fn roc_auc_pairwise(scores: &[f64], labels: &[bool]) -> Result<f64, MetricError> {
    let (n_pos, n_neg) = check(scores, labels)?;
    let mut credit_x2: u64 = 0;
    for (i, &si) in scores.iter().enumerate() {
        if !labels[i] {
            continue;
        }
        for (j, &sj) in scores.iter().enumerate() {
            if labels[j] {
                continue;
            }
            if si > sj {
                credit_x2 += 2;
            } else if si == sj {
                credit_x2 += 1;
            }
        }
    }
    Ok(credit_x2 as f64 / (2 * n_pos * n_neg) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_separation() {
        let s = [0.1, 0.2, 0.8, 0.9];
        let l = [false, false, true, true];
        assert_eq!(roc_auc(&s, &l).unwrap(), 1.0);
        let flipped: Vec<bool> = l.iter().map(|x| !x).collect();
        assert_eq!(roc_auc(&s, &flipped).unwrap(), 0.0);
    }

    #[test]
    fn all_ties_is_half() {
        let s = [0.3; 7];
        let l = [true, false, true, false, false, true, false];
        assert_eq!(roc_auc(&s, &l).unwrap(), 0.5);
    }

    #[test]
    fn single_class_is_undefined() {
        assert_eq!(
            roc_auc(&[0.1, 0.2], &[true, true]),
            Err(MetricError::SingleClass {
                positives: 2,
                negatives: 0
            })
        );
        assert!(matches!(roc_auc(&[], &[]), Err(MetricError::SingleClass { .. })));
    }

    #[test]
    fn rejects_nan_and_length_mismatch() {
        assert_eq!(roc_auc(&[0.1, f64::NAN], &[true, false]), Err(MetricError::NanScore(1)));
        assert!(matches!(
            roc_auc(&[0.1], &[true, false]),
            Err(MetricError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn small_hand_counted_case() {
        // Positives {0.4, 0.4, 0.9}, negatives {0.1, 0.4, 0.5}:
        // 0.4 -> 1 win, 1 tie (x2), 0.9 -> 3 wins => (5 + 1) / 9
        let s = [0.4, 0.1, 0.4, 0.4, 0.9, 0.5];
        let l = [true, false, true, false, true, false];
        assert!((roc_auc(&s, &l).unwrap() - 6.0 / 9.0).abs() < 1e-15);
        assert!((roc_auc_pairwise(&s, &l).unwrap() - 6.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn infinite_scores_are_ordered() {
        let s = [f64::NEG_INFINITY, f64::INFINITY, 0.0];
        let l = [false, true, false];
        assert_eq!(roc_auc(&s, &l).unwrap(), 1.0);
    }
}
