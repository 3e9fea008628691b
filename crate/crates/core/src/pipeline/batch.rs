use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::manifest::{sha256_hex, Label, Manifest, ManifestHeader, ManifestRecord, RunInfo, MANIFEST_VERSION};
use super::plan::{sample_plan, step_rng};
use super::{LevelScheme, PipelineError};
use crate::distortions::{apply, SeverityTable};
use crate::image::{io, ImageBuffer};
use crate::metrics::Track;
use crate::rng::{mix_seed, stable_hash};

const TRACK_DOMAIN: u64 = 0x7472_6163_6b00_0000;
pub const MANIFEST_FILE: &str = "manifest.jsonl";
pub const IMAGE_DIR: &str = "images";

/// One row of an `image_id,path,label` listing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ListingEntry {
    pub image_id: String,
    pub path: String,
    pub label: Label,
}

/// Parses a listing and rejects duplicate or empty ids.
pub fn read_listing<R: Read>(reader: R) -> Result<Vec<ListingEntry>, PipelineError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = rdr.headers().map_err(|e| PipelineError::Listing(e.to_string()))?;
    if header.iter().collect::<Vec<_>>() != ["image_id", "path", "label"] {
        return Err(PipelineError::Listing(format!(
            "header must be `image_id,path,label`, got `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut entries: Vec<ListingEntry> = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, row) in rdr.deserialize().enumerate() {
        let e: ListingEntry = row.map_err(|e| PipelineError::Listing(format!("row {}: {e}", i + 1)))?;
        if e.image_id.is_empty() {
            return Err(PipelineError::Listing(format!("row {}: empty image_id", i + 1)));
        }
        if !seen.insert(e.image_id.clone()) {
            return Err(PipelineError::Listing(format!("duplicate image_id `{}`", e.image_id)));
        }
        entries.push(e);
    }
    Ok(entries)
}

/// File name for an id: unsafe characters become `_`, and a short hash of
/// the id is appended whenever anything was replaced.
pub fn output_name(image_id: &str) -> String {
    let clean: String = image_id
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.') { c } else { '_' })
        .collect();
    if clean == image_id && !clean.starts_with('.') {
        format!("{clean}.png")
    } else {
        format!("{clean}-{:08x}.png", stable_hash(image_id) >> 32)
    }
}

fn track_rank_key(global_seed: u64, image_id: &str) -> u64 {
    mix_seed(global_seed ^ TRACK_DOMAIN, stable_hash(image_id))
}

/// Robust / clean split. The robust total is `round(fraction * n)`, shared
/// between labels by largest remainder of `fraction * n_label`; within a
/// label the images with the smallest `(hash(seed, id), id)` go robust.
/// Depends only on ids and labels, never on listing order.
pub fn assign_tracks(entries: &[ListingEntry], robust_fraction: f64, global_seed: u64) -> Vec<Track> {
    let mut by_label: BTreeMap<Label, Vec<usize>> = BTreeMap::new();
    for (i, e) in entries.iter().enumerate() {
        by_label.entry(e.label).or_default().push(i);
    }
    let total = (robust_fraction * entries.len() as f64).round() as usize;
    let mut quota: BTreeMap<Label, usize> = BTreeMap::new();
    let mut remainders = Vec::new();
    for (&label, idx) in &by_label {
        let exact = robust_fraction * idx.len() as f64;
        quota.insert(label, exact.floor() as usize);
        remainders.push((exact - exact.floor(), label));
    }
    // Largest remainder first; ties go to the lower label.
    remainders.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut left = total.saturating_sub(quota.values().sum());
    for (_, label) in remainders {
        if left == 0 {
            break;
        }
        if quota[&label] < by_label[&label].len() {
            *quota.get_mut(&label).unwrap() += 1;
            left -= 1;
        }
    }
    let mut tracks = vec![Track::Clean; entries.len()];
    for (label, mut idx) in by_label {
        idx.sort_by_key(|&i| (track_rank_key(global_seed, &entries[i].image_id), entries[i].image_id.as_str()));
        for &i in idx.iter().take(quota[&label]) {
            tracks[i] = Track::Robust;
        }
    }
    tracks
}

pub struct BatchConfig<'a> {
    pub entries: &'a [ListingEntry],
    /// Base for relative listing paths.
    pub input_root: PathBuf,
    pub output_dir: PathBuf,
    pub scheme: &'a LevelScheme,
    pub table: &'a SeverityTable,
    pub robust_fraction: f64,
    pub global_seed: u64,
    pub jobs: usize,
    /// Echoed into the manifest header.
    pub extra: Value,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BatchSummary {
    pub total: usize,
    pub clean: usize,
    pub robust: usize,
    pub real: usize,
    pub fake: usize,
    pub failed: usize,
    pub kinds: BTreeMap<String, usize>,
    pub plan_lengths: BTreeMap<usize, usize>,
}

impl BatchSummary {
    pub fn from_records(records: &[ManifestRecord]) -> Self {
        let mut s = BatchSummary {
            total: records.len(),
            ..Default::default()
        };
        for r in records {
            match r.track {
                Track::Clean => s.clean += 1,
                Track::Robust => s.robust += 1,
            }
            match r.label {
                Label::Real => s.real += 1,
                Label::Fake => s.fake += 1,
            }
            if r.error.is_some() {
                s.failed += 1;
            }
            if let Some(p) = &r.plan {
                *s.plan_lengths.entry(p.steps.len()).or_default() += 1;
                for step in &p.steps {
                    *s.kinds.entry(step.kind().name().to_string()).or_default() += 1;
                }
            }
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct BatchOutcome {
    pub manifest_path: PathBuf,
    pub manifest: Manifest,
    pub summary: BatchSummary,
}

pub fn resolve_source(root: &Path, source: &str) -> PathBuf {
    let p = Path::new(source);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        root.join(p)
    }
}

/// Distorts robust-track images, re-encodes clean ones, writes PNG outputs
/// under `images/` and the manifest, records sorted by id. Per-image
/// failures are recorded and do not stop the run.
pub fn run_batch(cfg: &BatchConfig<'_>) -> Result<BatchOutcome, PipelineError> {
    cfg.scheme.validate()?;
    cfg.table.validate()?;
    if !(0.0..=1.0).contains(&cfg.robust_fraction) {
        return Err(PipelineError::Config(format!(
            "robust fraction {} outside [0, 1]",
            cfg.robust_fraction
        )));
    }
    if cfg.table.num_levels() != cfg.scheme.num_levels {
        return Err(PipelineError::Config(format!(
            "scheme `{}` uses {} levels but the severity table has {}",
            cfg.scheme.name,
            cfg.scheme.num_levels,
            cfg.table.num_levels()
        )));
    }
    let mut names = BTreeMap::new();
    for e in cfg.entries {
        let name = output_name(&e.image_id);
        // Case-insensitive file systems would merge these.
        if let Some(other) = names.insert(name.to_ascii_lowercase(), e.image_id.clone()) {
            return Err(PipelineError::Listing(format!(
                "image ids `{other}` and `{}` map to the same output file",
                e.image_id
            )));
        }
    }
    let image_dir = cfg.output_dir.join(IMAGE_DIR);
    fs::create_dir_all(&image_dir).map_err(PipelineError::io(image_dir.display().to_string()))?;

    let tracks = assign_tracks(cfg.entries, cfg.robust_fraction, cfg.global_seed);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| PipelineError::Config(e.to_string()))?;
    let mut records: Vec<ManifestRecord> = pool.install(|| {
        cfg.entries
            .par_iter()
            .zip(tracks.par_iter())
            .map(|(e, &track)| process(cfg, e, track))
            .collect::<Result<Vec<_>, _>>()
    })?;
    records.sort_by(|a, b| a.image_id.cmp(&b.image_id));

    let manifest = Manifest {
        header: ManifestHeader {
            manifest_v: MANIFEST_VERSION,
            run: RunInfo {
                scheme: cfg.scheme.clone(),
                robust_fraction: cfg.robust_fraction,
                global_seed: cfg.global_seed,
                input_root: cfg.input_root.display().to_string(),
                severity_table: cfg.table.to_value(),
                extra: cfg.extra.clone(),
            },
        },
        records,
    };
    let manifest_path = cfg.output_dir.join(MANIFEST_FILE);
    let mut buf = Vec::new();
    manifest.write(&mut buf)?;
    fs::write(&manifest_path, buf).map_err(PipelineError::io(manifest_path.display().to_string()))?;
    let summary = BatchSummary::from_records(&manifest.records);
    Ok(BatchOutcome {
        manifest_path,
        manifest,
        summary,
    })
}

/// Only the plan can fail the whole run (it is a configuration problem);
/// image problems become record errors.
fn process(cfg: &BatchConfig<'_>, e: &ListingEntry, track: Track) -> Result<ManifestRecord, PipelineError> {
    let mut plan = match track {
        Track::Robust => Some(sample_plan(&e.image_id, cfg.scheme, cfg.table, cfg.global_seed)?),
        Track::Clean => None,
    };
    let mut record = ManifestRecord {
        manifest_v: MANIFEST_VERSION,
        image_id: e.image_id.clone(),
        source_path: e.path.clone(),
        output_path: None,
        output_sha256: None,
        label: e.label,
        track,
        plan: None,
        global_seed: cfg.global_seed,
        error: None,
    };
    let rendered = io::load(&resolve_source(&cfg.input_root, &e.path))
        .map_err(|err| err.to_string())
        .and_then(|src| match plan.as_mut() {
            Some(p) => render_plan(&src, p).map_err(|err| err.to_string()),
            None => Ok(src),
        })
        .and_then(|img| {
            let rel = format!("{IMAGE_DIR}/{}", output_name(&e.image_id));
            let bytes = io::encode_png(&img).map_err(|err| err.to_string())?;
            let path = cfg.output_dir.join(&rel);
            fs::write(&path, &bytes).map_err(|err| format!("{}: {err}", path.display()))?;
            Ok((rel, sha256_hex(&bytes)))
        });
    match rendered {
        Ok((rel, digest)) => {
            record.output_path = Some(rel);
            record.output_sha256 = Some(digest);
        }
        Err(msg) => record.error = Some(msg),
    }
    record.plan = plan;
    Ok(record)
}

/// Applies the steps in order, replacing each with its resolved form.
pub fn render_plan(
    src: &ImageBuffer,
    plan: &mut super::DistortionPlan,
) -> Result<ImageBuffer, crate::distortions::DistortionError> {
    let mut img = src.clone();
    for (k, step) in plan.steps.iter_mut().enumerate() {
        let out = apply(&img, step, &step_rng(plan.seed, &plan.image_id, k))?;
        img = out.image;
        *step = out.spec;
    }
    Ok(img)
}

/// Re-renders a record from its source. Checks the record's structure, each
/// step's level and parameters, and, when a table is given, that every
/// step's parameters are that table's entry for its level.
pub fn replay(
    record: &ManifestRecord,
    source_root: &Path,
    table: Option<&SeverityTable>,
) -> Result<ImageBuffer, PipelineError> {
    record.validate()?;
    if let Some(plan) = &record.plan {
        for step in &plan.steps {
            step.validate(plan.num_levels)?;
            if let Some(t) = table {
                let expected = t.params(step.kind(), step.level)?;
                if &step.params.base() != expected {
                    return Err(PipelineError::Manifest(format!(
                        "{}: {} level {} parameters differ from the severity table",
                        record.image_id,
                        step.kind(),
                        step.level
                    )));
                }
            }
        }
    }
    let src = io::load(&resolve_source(source_root, &record.source_path))?;
    match &record.plan {
        None => Ok(src),
        Some(plan) => {
            let mut plan = plan.clone();
            Ok(render_plan(&src, &mut plan)?)
        }
    }
}
