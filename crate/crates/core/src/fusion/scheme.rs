use std::collections::BTreeMap;
use std::io::Read;

use serde::{Deserialize, Serialize};

use super::{
    aggregate_tta, average_probs, intsig_fuse, prism_predict, rapid_cascade, weighted_expert_average, FusionError,
    Gate2Policy, HeadType, IntsigScores, PrismInputs, PrismModel, RapidScores, TtaBundle, TwoClassLogits,
};

/// `image_id,<columns...>` score table.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    pub columns: Vec<String>,
    pub ids: Vec<String>,
    /// Row-major, `ids.len() x columns.len()`.
    pub values: Vec<Vec<f64>>,
}

impl ScoreTable {
    pub fn read<R: Read>(reader: R) -> Result<Self, FusionError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header = rdr.headers().map_err(|e| FusionError::Config(e.to_string()))?.clone();
        if header.get(0) != Some("image_id") {
            return Err(FusionError::MissingColumn("image_id".into()));
        }
        let columns: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut ids = Vec::new();
        let mut values = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let row = i + 1;
            let rec = rec.map_err(|e| FusionError::Row {
                row,
                reason: e.to_string(),
            })?;
            ids.push(rec[0].to_string());
            let vals = rec
                .iter()
                .skip(1)
                .map(|c| {
                    c.parse::<f64>().map_err(|_| FusionError::Row {
                        row,
                        reason: format!("`{c}` is not a number"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            values.push(vals);
        }
        Ok(Self { columns, ids, values })
    }

    fn index(&self, name: &str) -> Result<usize, FusionError> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| FusionError::MissingColumn(name.to_string()))
    }

    fn indices<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>, FusionError> {
        names.iter().map(|n| self.index(n.as_ref())).collect()
    }
}

fn role_columns(roles: &[&str], mapping: &BTreeMap<String, String>) -> Result<Vec<String>, FusionError> {
    if let Some(unknown) = mapping.keys().find(|k| !roles.contains(&k.as_str())) {
        return Err(FusionError::Config(format!("unknown role `{unknown}`")));
    }
    Ok(roles
        .iter()
        .map(|r| mapping.get(*r).cloned().unwrap_or_else(|| r.to_string()))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrismColumns {
    pub prob: String,
    pub prob_flipped: String,
    pub robust_auc: f64,
}

/// A fusion rule plus the mapping from its input roles to table columns.
/// Roles not listed in `columns` are read from a column of the same name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "snake_case", deny_unknown_fields)]
pub enum FusionScheme {
    /// Output is the final cascade probability.
    Rapid {
        #[serde(default)]
        columns: BTreeMap<String, String>,
    },
    /// Output is the fused `logit1 - logit0`.
    Intsig {
        #[serde(default = "default_true")]
        gates: bool,
        #[serde(default)]
        gate2_policy: Gate2Policy,
        #[serde(default)]
        columns: BTreeMap<String, String>,
    },
    Prism { models: Vec<PrismColumns> },
    Average { columns: Vec<String> },
    Weighted { columns: Vec<String>, weights: Vec<f64> },
    Tta { head: HeadType, columns: Vec<String> },
}

fn default_true() -> bool {
    true
}

impl FusionScheme {
    pub fn from_json(text: &str) -> Result<Self, FusionError> {
        serde_json::from_str(text).map_err(|e| FusionError::Config(e.to_string()))
    }

    pub fn name(&self) -> &'static str {
        match self {
            FusionScheme::Rapid { .. } => "rapid",
            FusionScheme::Intsig { .. } => "intsig",
            FusionScheme::Prism { .. } => "prism",
            FusionScheme::Average { .. } => "average",
            FusionScheme::Weighted { .. } => "weighted",
            FusionScheme::Tta { .. } => "tta",
        }
    }

    /// Every table column the scheme reads.
    pub fn required_columns(&self) -> Result<Vec<String>, FusionError> {
        Ok(match self {
            FusionScheme::Rapid { columns } => role_columns(&RapidScores::ROLES, columns)?,
            FusionScheme::Intsig { columns, .. } => role_columns(&IntsigScores::ROLES, columns)?,
            FusionScheme::Prism { models } => models
                .iter()
                .flat_map(|m| [m.prob.clone(), m.prob_flipped.clone()])
                .collect(),
            FusionScheme::Average { columns }
            | FusionScheme::Weighted { columns, .. }
            | FusionScheme::Tta { columns, .. } => columns.clone(),
        })
    }

    /// One fused score per row, in table order.
    pub fn fuse(&self, table: &ScoreTable) -> Result<Vec<(String, f64)>, FusionError> {
        let cols = table.indices(&self.required_columns()?)?;
        if cols.is_empty() {
            return Err(FusionError::Empty("column list"));
        }
        let mut out = Vec::with_capacity(table.ids.len());
        for (i, (id, row)) in table.ids.iter().zip(&table.values).enumerate() {
            let v: Vec<f64> = cols.iter().map(|&c| row[c]).collect();
            let score = self.fuse_row(&v).map_err(|e| FusionError::Row {
                row: i + 1,
                reason: e.to_string(),
            })?;
            out.push((id.clone(), score));
        }
        Ok(out)
    }

    /// Fuses one row of values given in [`FusionScheme::required_columns`] order.
    pub fn fuse_row(&self, v: &[f64]) -> Result<f64, FusionError> {
        match self {
            FusionScheme::Rapid { .. } => {
                let s = RapidScores::from_array(v.try_into().expect("six rapid columns"))?;
                Ok(rapid_cascade(&s).f)
            }
            FusionScheme::Intsig {
                gates, gate2_policy, ..
            } => {
                let m: [TwoClassLogits; 5] = std::array::from_fn(|k| TwoClassLogits::new(v[2 * k], v[2 * k + 1]));
                Ok(intsig_fuse(&IntsigScores::new(m)?, *gates, *gate2_policy).score())
            }
            FusionScheme::Prism { models } => {
                let models = models
                    .iter()
                    .enumerate()
                    .map(|(k, m)| PrismModel {
                        prob: v[2 * k],
                        prob_flipped: v[2 * k + 1],
                        robust_auc: m.robust_auc,
                    })
                    .collect();
                prism_predict(&PrismInputs { models })
            }
            FusionScheme::Average { .. } => average_probs(v),
            FusionScheme::Weighted { weights, .. } => weighted_expert_average(v, weights),
            FusionScheme::Tta { head, .. } => aggregate_tta(&TtaBundle {
                views: v.to_vec(),
                head: *head,
            }),
        }
    }
}
