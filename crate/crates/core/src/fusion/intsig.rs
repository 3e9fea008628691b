use serde::{Deserialize, Serialize};

use super::FusionError;

pub const GATE1_M4_THRESHOLD: f64 = 8.0;
pub const GATE1_M5_THRESHOLD: f64 = 3.0;
pub const GATE1_SHIFT: f64 = 2.5;

const INNER: [f64; 3] = [0.75, 0.15, 0.10];
const MIDDLE_INNER: f64 = 0.7;
const MIDDLE_M4: f64 = 0.3;
const OUTER_MIDDLE: f64 = 0.7;
const OUTER_M5: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoClassLogits {
    pub logit0: f64,
    pub logit1: f64,
}

impl TwoClassLogits {
    pub fn new(logit0: f64, logit1: f64) -> Self {
        Self { logit0, logit1 }
    }

    /// `logit1 - logit0`.
    pub fn diff(self) -> f64 {
        self.logit1 - self.logit0
    }

    fn scale(self, w: f64) -> Self {
        Self::new(w * self.logit0, w * self.logit1)
    }

    fn add(self, o: Self) -> Self {
        Self::new(self.logit0 + o.logit0, self.logit1 + o.logit1)
    }
}

/// Logits of models M1..M5, already TTA-aggregated where applicable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntsigScores {
    pub models: [TwoClassLogits; 5],
}

impl IntsigScores {
    pub const ROLES: [&'static str; 10] = [
        "M1_logit0", "M1_logit1", "M2_logit0", "M2_logit1", "M3_logit0", "M3_logit1", "M4_logit0", "M4_logit1",
        "M5_logit0", "M5_logit1",
    ];

    pub fn new(models: [TwoClassLogits; 5]) -> Result<Self, FusionError> {
        for m in &models {
            for v in [m.logit0, m.logit1] {
                if !v.is_finite() {
                    return Err(FusionError::NonFiniteLogit(v));
                }
            }
        }
        Ok(Self { models })
    }

    fn diffs(&self) -> [f64; 5] {
        self.models.map(TwoClassLogits::diff)
    }
}

/// How M4's weight is redistributed when Gate-2 excludes it.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate2Policy {
    /// The middle bracket becomes the inner committee alone; the outer
    /// 0.7 / 0.3 split with M5 is kept.
    #[default]
    InnerBracket,
    /// The four remaining flattened weights are scaled to sum to one.
    Global,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntsigOutput {
    pub logits: TwoClassLogits,
    pub gate1: bool,
    pub gate2: bool,
}

impl IntsigOutput {
    /// The fused `logit1 - logit0`, used as the detection score.
    pub fn score(&self) -> f64 {
        self.logits.diff()
    }
}

/// Per-model weights after expanding the brackets, M1..M5.
pub fn intsig_flattened_weights(exclude_m4: Option<Gate2Policy>) -> [f64; 5] {
    let inner = OUTER_MIDDLE * MIDDLE_INNER;
    let full = [
        inner * INNER[0],
        inner * INNER[1],
        inner * INNER[2],
        OUTER_MIDDLE * MIDDLE_M4,
        OUTER_M5,
    ];
    match exclude_m4 {
        None => full,
        Some(Gate2Policy::InnerBracket) => [
            OUTER_MIDDLE * INNER[0],
            OUTER_MIDDLE * INNER[1],
            OUTER_MIDDLE * INNER[2],
            0.0,
            OUTER_M5,
        ],
        Some(Gate2Policy::Global) => {
            let mass = 1.0 - full[3];
            [full[0] / mass, full[1] / mass, full[2] / mass, 0.0, full[4] / mass]
        }
    }
}

fn hierarchical(m: &[TwoClassLogits; 5], exclude_m4: Option<Gate2Policy>) -> TwoClassLogits {
    let inner = m[0].scale(INNER[0]).add(m[1].scale(INNER[1])).add(m[2].scale(INNER[2]));
    match exclude_m4 {
        None => {
            let middle = inner.scale(MIDDLE_INNER).add(m[3].scale(MIDDLE_M4));
            middle.scale(OUTER_MIDDLE).add(m[4].scale(OUTER_M5))
        }
        Some(Gate2Policy::InnerBracket) => inner.scale(OUTER_MIDDLE).add(m[4].scale(OUTER_M5)),
        Some(Gate2Policy::Global) => {
            let w = intsig_flattened_weights(exclude_m4);
            [0, 1, 2, 4]
                .iter()
                .fold(TwoClassLogits::new(0.0, 0.0), |acc, &k| acc.add(m[k].scale(w[k])))
        }
    }
}

/// At least three of M1, M2, M3, M5 share a diff sign that M4 does not.
/// A zero diff neither agrees nor disagrees.
pub fn gate2_applies(s: &IntsigScores) -> bool {
    let d = s.diffs();
    let committee = [d[0], d[1], d[2], d[4]];
    let pos = committee.iter().filter(|&&x| x > 0.0).count();
    let neg = committee.iter().filter(|&&x| x < 0.0).count();
    (pos >= 3 && d[3] < 0.0) || (neg >= 3 && d[3] > 0.0)
}

/// M4 and M5 agree strongly in sign and magnitude while the fused diff
/// does not point the same way.
pub fn gate1_applies(s: &IntsigScores, fused_diff: f64) -> bool {
    let d = s.diffs();
    let (d4, d5) = (d[3], d[4]);
    d4.abs() >= GATE1_M4_THRESHOLD
        && d5.abs() >= GATE1_M5_THRESHOLD
        && d4.signum() == d5.signum()
        && sign(fused_diff) != sign(d4)
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Hierarchical fusion followed, when `gates` is set, by Gate-2 (drop M4,
/// re-fuse) and then Gate-1 (shift `logit1` by 2.5 toward M4/M5).
pub fn intsig_fuse(s: &IntsigScores, gates: bool, policy: Gate2Policy) -> IntsigOutput {
    let gate2 = gates && gate2_applies(s);
    let mut logits = hierarchical(&s.models, gate2.then_some(policy));
    let gate1 = gates && gate1_applies(s, logits.diff());
    if gate1 {
        logits.logit1 += GATE1_SHIFT * s.models[3].diff().signum();
    }
    IntsigOutput { logits, gate1, gate2 }
}
