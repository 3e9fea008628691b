use super::MetricError;

const SUM_TOLERANCE: f64 = 1e-9;

fn check_distribution(name: &str, p: &[f64]) -> Result<(), MetricError> {
    if p.is_empty() {
        return Err(MetricError::Domain(format!("{name} is empty")));
    }
    if let Some(v) = p.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(MetricError::Domain(format!("{name} has entry {v}")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(MetricError::Domain(format!("{name} sums to {sum}")));
    }
    Ok(())
}

/// `-ln p[label]`.
pub fn cross_entropy(probs: &[f64], label: usize) -> Result<f64, MetricError> {
    check_distribution("probs", probs)?;
    let p = *probs
        .get(label)
        .ok_or_else(|| MetricError::Domain(format!("label {label} out of range for {} classes", probs.len())))?;
    if p <= 0.0 {
        return Err(MetricError::Domain(format!("probability of label {label} is zero")));
    }
    Ok(-p.ln())
}

/// `sum p ln(p / q)` with `0 ln 0 = 0`; needs `q > 0` wherever `p > 0`.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> Result<f64, MetricError> {
    check_distribution("p", p)?;
    check_distribution("q", q)?;
    if p.len() != q.len() {
        return Err(MetricError::Domain(format!("lengths differ: {} vs {}", p.len(), q.len())));
    }
    let mut total = 0.0;
    for (i, (&pi, &qi)) in p.iter().zip(q).enumerate() {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return Err(MetricError::Domain(format!("q[{i}] is zero where p[{i}] = {pi}")));
        }
        total += pi * (pi / qi).ln();
    }
    Ok(total)
}

pub fn mean_squared_error(a: &[f64], b: &[f64]) -> Result<f64, MetricError> {
    if a.len() != b.len() {
        return Err(MetricError::Domain(format!("lengths differ: {} vs {}", a.len(), b.len())));
    }
    if a.is_empty() {
        return Err(MetricError::Domain("empty vectors".into()));
    }
    Ok(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() / a.len() as f64)
}

/// Weights of the consistency terms in `ce + alpha * kl + beta * mse`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LptWeights {
    pub alpha: f64,
    pub beta: f64,
}

impl Default for LptWeights {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            beta: 0.25,
        }
    }
}

pub fn lpt_loss(ce: f64, kl: f64, mse: f64, weights: LptWeights) -> f64 {
    ce + weights.alpha * kl + weights.beta * mse
}
