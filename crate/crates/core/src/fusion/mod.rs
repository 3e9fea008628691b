//! Ensemble score fusion: logit-space cascade, weighted hierarchical fusion
//! with gating, AUC-weighted flip averaging, plain and weighted probability
//! averaging, and test-time-augmentation aggregation.

mod average;
mod intsig;
mod prism;
mod rapid;
mod scheme;

pub use average::{aggregate_tta, average_probs, weighted_expert_average, HeadType, TtaBundle};
pub use intsig::{
    gate1_applies, gate2_applies, intsig_flattened_weights, intsig_fuse, Gate2Policy, IntsigOutput, IntsigScores,
    TwoClassLogits, GATE1_M4_THRESHOLD, GATE1_M5_THRESHOLD, GATE1_SHIFT,
};
pub use prism::{prism_predict, prism_weights, PrismInputs, PrismModel};
pub use rapid::{rapid_cascade, RapidScores, RapidStages, RAPID_STAGE_WEIGHTS};
pub use scheme::{FusionScheme, ScoreTable};

use thiserror::Error;

/// Clamp applied to probabilities before taking a logit.
pub const PROBABILITY_EPSILON: f64 = 1e-7;

#[derive(Debug, Error, PartialEq)]
pub enum FusionError {
    #[error("{0} is empty")]
    Empty(&'static str),
    #[error("value {value} is not a probability")]
    NotAProbability { value: f64 },
    #[error("non-finite logit {0}")]
    NonFiniteLogit(f64),
    #[error("weight {0} must be finite and non-negative")]
    InvalidWeight(f64),
    #[error("weights sum to zero")]
    ZeroWeightMass,
    #[error("robust AUC {0} must lie in (0, 1]")]
    InvalidAuc(f64),
    #[error("{expected} weights for {got} scores")]
    LengthMismatch { expected: usize, got: usize },
    #[error("missing column `{0}`")]
    MissingColumn(String),
    #[error("row {row}: {reason}")]
    Row { row: usize, reason: String },
    #[error("scheme config: {0}")]
    Config(String),
}

/// A probability clamped into `[eps, 1 - eps]` so its logit is finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    /// Clamps into range. Fails only for NaN or values outside `[0, 1]`.
    pub fn new(p: f64) -> Result<Self, FusionError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(FusionError::NotAProbability { value: p });
        }
        Ok(Self(p.clamp(PROBABILITY_EPSILON, 1.0 - PROBABILITY_EPSILON)))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn logit(self) -> f64 {
        logit(self)
    }
}

/// `ln(p / (1 - p))`.
pub fn logit(p: Probability) -> f64 {
    (p.0 / (1.0 - p.0)).ln()
}

/// `1 / (1 + e^-x)`, evaluated without overflow for either sign.
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}
