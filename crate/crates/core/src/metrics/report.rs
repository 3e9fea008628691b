use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{roc_auc, MetricError};

pub const COMBINED_ROBUST_WEIGHT: f64 = 0.7;
pub const COMBINED_CLEAN_WEIGHT: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Track {
    Clean,
    Robust,
}

impl fmt::Display for Track {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Track::Clean => "clean",
            Track::Robust => "robust",
        })
    }
}

/// Parallel score / label / track columns.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LabeledScores {
    pub scores: Vec<f64>,
    /// `true` for generated (label 1).
    pub labels: Vec<bool>,
    pub tracks: Vec<Track>,
}

impl LabeledScores {
    pub fn push(&mut self, score: f64, label: bool, track: Track) {
        self.scores.push(score);
        self.labels.push(label);
        self.tracks.push(track);
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// Scores and labels restricted to one track.
    pub fn track(&self, track: Track) -> (Vec<f64>, Vec<bool>) {
        self.tracks
            .iter()
            .enumerate()
            .filter(|(_, t)| **t == track)
            .map(|(i, _)| (self.scores[i], self.labels[i]))
            .unzip()
    }
}

/// `0.7 * robust + 0.3 * clean`.
pub fn combined_score(robust_auc: f64, clean_auc: f64) -> f64 {
    COMBINED_ROBUST_WEIGHT * robust_auc + COMBINED_CLEAN_WEIGHT * clean_auc
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    /// `None` when the track has no samples or a single class.
    pub clean_auc: Option<f64>,
    pub robust_auc: Option<f64>,
    pub combined: Option<f64>,
    pub n_clean: usize,
    pub n_robust: usize,
    pub clean_positives: usize,
    pub clean_negatives: usize,
    pub robust_positives: usize,
    pub robust_negatives: usize,
}

impl EvalReport {
    pub fn from_scores(data: &LabeledScores) -> Result<Self, MetricError> {
        let auc_of = |track| -> Result<(Option<f64>, usize, usize), MetricError> {
            let (s, l) = data.track(track);
            let pos = l.iter().filter(|&&x| x).count();
            let neg = l.len() - pos;
            match roc_auc(&s, &l) {
                Ok(v) => Ok((Some(v), pos, neg)),
                Err(MetricError::SingleClass { .. }) => Ok((None, pos, neg)),
                Err(e) => Err(e),
            }
        };
        let (clean_auc, clean_positives, clean_negatives) = auc_of(Track::Clean)?;
        let (robust_auc, robust_positives, robust_negatives) = auc_of(Track::Robust)?;
        let combined = match (robust_auc, clean_auc) {
            (Some(r), Some(c)) => Some(combined_score(r, c)),
            _ => None,
        };
        Ok(Self {
            clean_auc,
            robust_auc,
            combined,
            n_clean: clean_positives + clean_negatives,
            n_robust: robust_positives + robust_negatives,
            clean_positives,
            clean_negatives,
            robust_positives,
            robust_negatives,
        })
    }

    /// Column names for [`EvalReport::csv_row`].
    pub const CSV_HEADER: [&'static str; 9] = [
        "clean_auc",
        "robust_auc",
        "combined",
        "n_clean",
        "n_robust",
        "clean_positives",
        "clean_negatives",
        "robust_positives",
        "robust_negatives",
    ];

    /// Undefined metrics are written as empty cells.
    pub fn csv_row(&self) -> [String; 9] {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        [
            opt(self.clean_auc),
            opt(self.robust_auc),
            opt(self.combined),
            self.n_clean.to_string(),
            self.n_robust.to_string(),
            self.clean_positives.to_string(),
            self.clean_negatives.to_string(),
            self.robust_positives.to_string(),
            self.robust_negatives.to_string(),
        ]
    }
}

/// Id problems found when joining predictions onto ground truth.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AlignmentReport {
    /// In the ground truth, no prediction.
    pub missing: Vec<String>,
    /// Predicted, not in the ground truth.
    pub unexpected: Vec<String>,
    /// More than one prediction row.
    pub duplicate_predictions: Vec<String>,
    /// More than one ground-truth row.
    pub duplicate_truth: Vec<String>,
}

impl AlignmentReport {
    pub fn is_clean(&self) -> bool {
        self.missing.is_empty()
            && self.unexpected.is_empty()
            && self.duplicate_predictions.is_empty()
            && self.duplicate_truth.is_empty()
    }
}

impl fmt::Display for AlignmentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, ids) in [
            ("missing", &self.missing),
            ("unexpected", &self.unexpected),
            ("duplicate predictions", &self.duplicate_predictions),
            ("duplicate manifest ids", &self.duplicate_truth),
        ] {
            if !ids.is_empty() {
                parts.push(format!("{} {name} [{}]", ids.len(), ids.join(", ")));
            }
        }
        f.write_str(&parts.join("; "))
    }
}

fn duplicates<'a>(ids: impl Iterator<Item = &'a str>) -> (BTreeSet<&'a str>, Vec<String>) {
    let mut seen = BTreeSet::new();
    let mut dup = BTreeSet::new();
    for id in ids {
        if !seen.insert(id) {
            dup.insert(id.to_string());
        }
    }
    (seen, dup.into_iter().collect())
}

/// Joins `(image_id, score)` predictions onto `(image_id, label, track)`
/// truth rows and scores both tracks. Row order does not matter.
pub fn evaluate<'a, T, P>(truth: T, predictions: P) -> Result<EvalReport, MetricError>
where
    T: IntoIterator<Item = (&'a str, bool, Track)>,
    P: IntoIterator<Item = (&'a str, f64)>,
{
    let truth: Vec<_> = truth.into_iter().collect();
    let predictions: Vec<_> = predictions.into_iter().collect();
    let (truth_ids, duplicate_truth) = duplicates(truth.iter().map(|t| t.0));
    let (pred_ids, duplicate_predictions) = duplicates(predictions.iter().map(|p| p.0));
    let report = AlignmentReport {
        missing: truth_ids.difference(&pred_ids).map(|s| s.to_string()).collect(),
        unexpected: pred_ids.difference(&truth_ids).map(|s| s.to_string()).collect(),
        duplicate_predictions,
        duplicate_truth,
    };
    if !report.is_clean() {
        return Err(MetricError::Alignment(report));
    }
    let by_id: BTreeMap<&str, f64> = predictions.into_iter().collect();
    // Sorted by id so the result never depends on input row order.
    let mut rows = truth;
    rows.sort_by(|a, b| a.0.cmp(b.0));
    let mut data = LabeledScores::default();
    for (id, label, track) in rows {
        data.push(by_id[id], label, track);
    }
    EvalReport::from_scores(&data)
}
