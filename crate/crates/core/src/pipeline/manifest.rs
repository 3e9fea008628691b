use std::fmt;
use std::io::{BufRead, Write};

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::{DistortionPlan, LevelScheme, PipelineError};
use crate::metrics::Track;

pub const MANIFEST_VERSION: u32 = 1;

/// Ground-truth class, written as `0` (real) or `1` (fake).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Real,
    Fake,
}

impl Label {
    pub fn from_int(v: u64) -> Option<Self> {
        match v {
            0 => Some(Label::Real),
            1 => Some(Label::Fake),
            _ => None,
        }
    }

    pub fn as_int(self) -> u8 {
        match self {
            Label::Real => 0,
            Label::Fake => 1,
        }
    }

    pub fn is_fake(self) -> bool {
        self == Label::Fake
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_int())
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(self.as_int())
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl de::Visitor<'_> for V {
            type Value = Label;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("label 0 or 1")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Label, E> {
                Label::from_int(v).ok_or_else(|| E::custom(format!("label must be 0 or 1, got {v}")))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Label, E> {
                u64::try_from(v)
                    .ok()
                    .and_then(Label::from_int)
                    .ok_or_else(|| E::custom(format!("label must be 0 or 1, got {v}")))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Label, E> {
                match v.trim() {
                    "0" => Ok(Label::Real),
                    "1" => Ok(Label::Fake),
                    other => Err(E::custom(format!("label must be 0 or 1, got `{other}`"))),
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// Run-wide settings written as the manifest's first line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunInfo {
    pub scheme: LevelScheme,
    pub robust_fraction: f64,
    pub global_seed: u64,
    /// Directory that relative `source_path`s are resolved against.
    pub input_root: String,
    pub severity_table: Value,
    /// Caller-supplied settings echoed for provenance.
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub extra: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestHeader {
    pub manifest_v: u32,
    pub run: RunInfo,
}

/// One image of a batch run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestRecord {
    pub manifest_v: u32,
    pub image_id: String,
    pub source_path: String,
    /// Relative to the output directory; absent when the record failed.
    pub output_path: Option<String>,
    /// SHA-256 of the output file bytes.
    pub output_sha256: Option<String>,
    pub label: Label,
    pub track: Track,
    /// Resolved plan for robust records, `null` for clean ones.
    pub plan: Option<DistortionPlan>,
    pub global_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ManifestRecord {
    /// Track / plan consistency and version.
    pub fn validate(&self) -> Result<(), PipelineError> {
        let bad = |m: String| Err(PipelineError::Manifest(format!("{}: {m}", self.image_id)));
        if self.manifest_v != MANIFEST_VERSION {
            return bad(format!("unsupported manifest_v {}", self.manifest_v));
        }
        match (&self.track, &self.plan) {
            (Track::Clean, Some(_)) => return bad("clean record carries a plan".into()),
            (Track::Robust, None) => return bad("robust record has no plan".into()),
            (Track::Robust, Some(p)) if p.steps.is_empty() => return bad("robust record has an empty plan".into()),
            _ => {}
        }
        if let Some(p) = &self.plan {
            if p.image_id != self.image_id {
                return bad(format!("plan belongs to `{}`", p.image_id));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub header: ManifestHeader,
    pub records: Vec<ManifestRecord>,
}

impl Manifest {
    pub fn write<W: Write>(&self, mut w: W) -> Result<(), PipelineError> {
        let line = serde_json::to_string(&self.header).map_err(|e| PipelineError::Manifest(e.to_string()))?;
        writeln!(w, "{line}").map_err(PipelineError::io("manifest"))?;
        for r in &self.records {
            let line = serde_json::to_string(r).map_err(|e| PipelineError::Manifest(e.to_string()))?;
            writeln!(w, "{line}").map_err(PipelineError::io("manifest"))?;
        }
        w.flush().map_err(PipelineError::io("manifest"))
    }

    pub fn read<R: BufRead>(r: R) -> Result<Self, PipelineError> {
        let mut lines = r.lines().enumerate().filter(|(_, l)| !matches!(l, Ok(s) if s.trim().is_empty()));
        let parse_err = |n: usize, e: serde_json::Error| PipelineError::Manifest(format!("line {}: {e}", n + 1));
        let (n, first) = lines
            .next()
            .ok_or_else(|| PipelineError::Manifest("empty manifest".into()))?;
        let header: ManifestHeader =
            serde_json::from_str(&first.map_err(PipelineError::io("manifest"))?).map_err(|e| parse_err(n, e))?;
        if header.manifest_v != MANIFEST_VERSION {
            return Err(PipelineError::Manifest(format!("unsupported manifest_v {}", header.manifest_v)));
        }
        let mut records = Vec::new();
        for (n, line) in lines {
            let rec: ManifestRecord =
                serde_json::from_str(&line.map_err(PipelineError::io("manifest"))?).map_err(|e| parse_err(n, e))?;
            records.push(rec);
        }
        Ok(Self { header, records })
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}
