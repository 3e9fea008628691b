use serde::{Deserialize, Serialize};

use super::{sigmoid, FusionError, Probability};

/// Arithmetic mean of probabilities.
pub fn average_probs(probs: &[f64]) -> Result<f64, FusionError> {
    if probs.is_empty() {
        return Err(FusionError::Empty("probability list"));
    }
    Ok(probs.iter().sum::<f64>() / probs.len() as f64)
}

/// `sum w_i s_i / sum w_i`.
pub fn weighted_expert_average(scores: &[f64], weights: &[f64]) -> Result<f64, FusionError> {
    if scores.is_empty() {
        return Err(FusionError::Empty("expert list"));
    }
    if scores.len() != weights.len() {
        return Err(FusionError::LengthMismatch {
            expected: scores.len(),
            got: weights.len(),
        });
    }
    if let Some(&w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
        return Err(FusionError::InvalidWeight(w));
    }
    let mass: f64 = weights.iter().sum();
    if mass == 0.0 {
        return Err(FusionError::ZeroWeightMass);
    }
    Ok(scores.iter().zip(weights).map(|(s, w)| s * w).sum::<f64>() / mass)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeadType {
    /// Views are averaged in logit space, then squashed.
    Sigmoid,
    /// Views' class probabilities are averaged.
    Softmax,
}

/// Per-view positive-class probabilities of one model on one image.
#[derive(Debug, Clone, PartialEq)]
pub struct TtaBundle {
    pub views: Vec<f64>,
    pub head: HeadType,
}

pub fn aggregate_tta(b: &TtaBundle) -> Result<f64, FusionError> {
    if b.views.is_empty() {
        return Err(FusionError::Empty("view list"));
    }
    match b.head {
        HeadType::Softmax => {
            for &v in &b.views {
                Probability::new(v)?;
            }
            average_probs(&b.views)
        }
        HeadType::Sigmoid => {
            let mut total = 0.0;
            for &v in &b.views {
                total += Probability::new(v)?.logit();
            }
            Ok(sigmoid(total / b.views.len() as f64))
        }
    }
}
