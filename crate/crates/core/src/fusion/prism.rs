use super::FusionError;

/// `w_k = A_k / sum_j A_j`.
pub fn prism_weights(aucs: &[f64]) -> Result<Vec<f64>, FusionError> {
    if aucs.is_empty() {
        return Err(FusionError::Empty("model list"));
    }
    if let Some(&a) = aucs.iter().find(|&&a| !(a > 0.0 && a <= 1.0)) {
        return Err(FusionError::InvalidAuc(a));
    }
    let total: f64 = aucs.iter().sum();
    Ok(aucs.iter().map(|a| a / total).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrismModel {
    /// Probability on the image.
    pub prob: f64,
    /// Probability on the horizontally flipped image.
    pub prob_flipped: f64,
    /// Robust validation AUC.
    pub robust_auc: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrismInputs {
    pub models: Vec<PrismModel>,
}

/// Flip-averaged, AUC-weighted mean of probabilities.
pub fn prism_predict(inp: &PrismInputs) -> Result<f64, FusionError> {
    let aucs: Vec<f64> = inp.models.iter().map(|m| m.robust_auc).collect();
    let w = prism_weights(&aucs)?;
    for m in &inp.models {
        for p in [m.prob, m.prob_flipped] {
            if !(0.0..=1.0).contains(&p) {
                return Err(FusionError::NotAProbability { value: p });
            }
        }
    }
    let plain: f64 = inp.models.iter().zip(&w).map(|(m, w)| w * m.prob).sum();
    let flipped: f64 = inp.models.iter().zip(&w).map(|(m, w)| w * m.prob_flipped).sum();
    Ok(0.5 * (plain + flipped))
}
