use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::distortions::{DistortionGroup, DistortionKind};

/// How many distortions a plan holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum CountRule {
    /// Uniform over `min..=max`.
    Range { min: u32, max: u32 },
    Fixed { count: u32 },
}

impl CountRule {
    pub fn bounds(self) -> (u32, u32) {
        match self {
            CountRule::Range { min, max } => (min, max),
            CountRule::Fixed { count } => (count, count),
        }
    }
}

/// How each step's severity level is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum SeverityRule {
    /// Uniform over `1..=num_levels`.
    Uniform,
    /// `N(mean, std)` over zero-based level indices, rounded half away from
    /// zero and clamped to `0..num_levels`; the level is the index plus one.
    Gaussian { mean: f64, std: f64 },
}

/// A named sampling scheme for distortion plans.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelScheme {
    pub name: String,
    pub count: CountRule,
    pub severity: SeverityRule,
    pub num_levels: u8,
    pub distinct_groups: bool,
    /// Probability that a training sample is distorted at all. Recorded for
    /// reference; robust-track images are always distorted.
    #[serde(default = "one")]
    pub apply_probability: f64,
    /// Kinds a plan may draw from.
    pub pool: Vec<DistortionKind>,
}

fn one() -> f64 {
    1.0
}

/// Every catalogued kind except the resize utility and the two extra
/// noise/colour transforms added by the teleai scheme.
pub fn challenge_pool() -> Vec<DistortionKind> {
    use DistortionKind::*;
    DistortionKind::ALL
        .iter()
        .copied()
        .filter(|k| !matches!(k, SquishResize | MultiplicativeNoise | ColorCast))
        .collect()
}

impl LevelScheme {
    pub const BUILTIN_NAMES: [&'static str; 7] = [
        "challenge",
        "ant_mild",
        "ant_moderate",
        "ant_heavy",
        "teleai",
        "intsig_light",
        "vincentlc",
    ];

    pub fn builtin(name: &str) -> Option<Self> {
        let gaussian = |mean, std| SeverityRule::Gaussian { mean, std };
        let range = |min, max| CountRule::Range { min, max };
        let (count, severity, num_levels, distinct_groups, apply_probability) = match name {
            "challenge" => (range(1, 5), SeverityRule::Uniform, 5, true, 1.0),
            "ant_mild" => (range(1, 3), gaussian(0.0, 2.5), 5, false, 1.0),
            "ant_moderate" => (range(3, 6), gaussian(2.5, 2.0), 5, false, 1.0),
            "ant_heavy" => (CountRule::Fixed { count: 6 }, gaussian(3.5, 1.0), 5, false, 1.0),
            "teleai" => (range(1, 5), gaussian(3.0, 1.5), 5, true, 1.0),
            "intsig_light" => (range(1, 3), SeverityRule::Uniform, 3, true, 0.5),
            "vincentlc" => (range(1, 3), SeverityRule::Uniform, 5, true, 1.0),
            _ => return None,
        };
        let mut pool = challenge_pool();
        if name == "teleai" {
            pool.push(DistortionKind::MultiplicativeNoise);
            pool.push(DistortionKind::ColorCast);
            pool.sort();
        }
        Some(Self {
            name: name.to_string(),
            count,
            severity,
            num_levels,
            distinct_groups,
            apply_probability,
            pool,
        })
    }

    pub fn builtins() -> Vec<Self> {
        Self::BUILTIN_NAMES
            .iter()
            .map(|n| Self::builtin(n).expect("builtin"))
            .collect()
    }

    pub fn groups_in_pool(&self) -> BTreeSet<DistortionGroup> {
        self.pool.iter().map(|k| k.group()).collect()
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        let err = |m: String| Err(PipelineError::Config(format!("scheme `{}`: {m}", self.name)));
        let (min, max) = self.count.bounds();
        if min == 0 || min > max {
            return err(format!("count bounds {min}..={max} must satisfy 1 <= min <= max"));
        }
        if self.num_levels == 0 {
            return err("num_levels must be positive".into());
        }
        if let SeverityRule::Gaussian { mean, std } = self.severity {
            if !mean.is_finite() || !(std.is_finite() && std > 0.0) {
                return err(format!("severity N({mean}, {std}) needs a finite mean and positive std"));
            }
        }
        if !(0.0..=1.0).contains(&self.apply_probability) {
            return err(format!("apply_probability {} outside [0, 1]", self.apply_probability));
        }
        let unique: BTreeSet<_> = self.pool.iter().collect();
        if unique.len() != self.pool.len() {
            return err("pool lists a kind twice".into());
        }
        if self.distinct_groups {
            let groups = self.groups_in_pool().len();
            if max as usize > groups {
                return err(format!(
                    "up to {max} distortions from distinct groups, but the pool spans {groups} groups"
                ));
            }
        } else if max as usize > self.pool.len() {
            return err(format!("up to {max} distinct kinds, but the pool has {}", self.pool.len()));
        }
        Ok(())
    }
}
