use serde::{Deserialize, Serialize};

use super::{LevelScheme, PipelineError, SeverityRule};
use crate::distortions::{DistortionSpec, SeverityTable};
use crate::rng::{stable_hash, SeededRng};

const PLAN_STREAM: u64 = 0;
const STEP_STREAM_BASE: u64 = 1;

/// Ordered distortion sequence for one image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistortionPlan {
    pub image_id: String,
    pub seed: u64,
    pub scheme: String,
    pub num_levels: u8,
    pub steps: Vec<DistortionSpec>,
}

/// The stream every random choice for `image_id` descends from.
pub fn image_rng(global_seed: u64, image_id: &str) -> SeededRng {
    SeededRng::new(global_seed).derive(stable_hash(image_id))
}

/// The stream handed to [`crate::distortions::apply`] for step `index`.
pub fn step_rng(global_seed: u64, image_id: &str, index: usize) -> SeededRng {
    image_rng(global_seed, image_id).derive(STEP_STREAM_BASE + index as u64)
}

pub fn sample_level(rule: SeverityRule, num_levels: u8, rng: &mut SeededRng) -> u8 {
    match rule {
        SeverityRule::Uniform => rng.int_inclusive(1, num_levels as i64) as u8,
        SeverityRule::Gaussian { mean, std } => {
            let index = rng.normal(mean, std).round().clamp(0.0, (num_levels - 1) as f64);
            index as u8 + 1
        }
    }
}

/// Draws count, kinds (no kind twice; no group twice when the scheme asks
/// for distinct groups), order and levels from `(global_seed, image_id)`.
/// Steps carry the table parameters; per-application draws are filled in
/// when the plan is applied.
pub fn sample_plan(
    image_id: &str,
    scheme: &LevelScheme,
    table: &SeverityTable,
    global_seed: u64,
) -> Result<DistortionPlan, PipelineError> {
    scheme.validate()?;
    if table.num_levels() != scheme.num_levels {
        return Err(PipelineError::Config(format!(
            "scheme `{}` uses {} levels but the severity table has {}",
            scheme.name,
            scheme.num_levels,
            table.num_levels()
        )));
    }
    let mut rng = image_rng(global_seed, image_id).derive(PLAN_STREAM);
    let (min, max) = scheme.count.bounds();
    let count = rng.int_inclusive(min as i64, max as i64) as usize;
    let mut candidates = scheme.pool.clone();
    let mut steps = Vec::with_capacity(count);
    for _ in 0..count {
        // validate() guarantees enough candidates remain.
        let kind = candidates[rng.below(candidates.len() as u64) as usize];
        if scheme.distinct_groups {
            candidates.retain(|k| k.group() != kind.group());
        } else {
            candidates.retain(|k| *k != kind);
        }
        let level = sample_level(scheme.severity, scheme.num_levels, &mut rng);
        steps.push(table.spec(kind, level)?);
    }
    Ok(DistortionPlan {
        image_id: image_id.to_string(),
        seed: global_seed,
        scheme: scheme.name.clone(),
        num_levels: scheme.num_levels,
        steps,
    })
}
