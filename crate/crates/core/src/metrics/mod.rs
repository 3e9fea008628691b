//! Clean / robust ROC AUC, the 0.7 / 0.3 combined score, the consistency
//! loss terms and PSNR.

mod auc;
mod io;
mod loss;
mod psnr;
mod report;

pub use auc::{roc_auc, roc_auc_pairwise};
pub use io::{read_predictions, write_predictions, write_report_csv, Prediction};
pub use loss::{cross_entropy, kl_divergence, lpt_loss, mean_squared_error, LptWeights};
pub use psnr::{psnr, Psnr};
pub use report::{combined_score, evaluate, AlignmentReport, EvalReport, LabeledScores, Track, COMBINED_CLEAN_WEIGHT, COMBINED_ROBUST_WEIGHT};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MetricError {
    #[error("ROC AUC undefined: {positives} positives and {negatives} negatives")]
    SingleClass { positives: usize, negatives: usize },
    #[error("scores and labels differ in length ({scores} vs {labels})")]
    LengthMismatch { scores: usize, labels: usize },
    #[error("score at index {0} is NaN")]
    NanScore(usize),
    #[error("invalid distribution: {0}")]
    Domain(String),
    #[error("images differ in size: {0:?} vs {1:?}")]
    DimensionMismatch((u32, u32), (u32, u32)),
    #[error("prediction ids do not match the manifest: {0}")]
    Alignment(AlignmentReport),
}
