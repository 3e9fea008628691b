use std::collections::BTreeSet;
use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use serde_json::json;
use wilddistort::distortions::{SeverityTable, TableFormat};
use wilddistort::fusion::{FusionError, FusionScheme, Gate2Policy, ScoreTable};
use wilddistort::image::io as image_io;
use wilddistort::metrics::{evaluate as eval_scores, read_predictions, write_report_csv, MetricError};
use wilddistort::pipeline::{
    read_listing, replay as replay_record, run_batch, sha256_hex, BatchConfig, LevelScheme, Manifest, PipelineError,
};

use crate::config::{ConfigFile, SeedSetting};
use crate::{CliError, DistortArgs, EvaluateArgs, FuseArgs, ReplayArgs, ReportFormat, Switch, TableAction, TableFormatArg};

/// Seed used when neither a flag nor the config names one.
pub const DEFAULT_SEED: u64 = 2026;
pub const DEFAULT_ROBUST_FRACTION: f64 = 0.5;
pub const DEFAULT_SCHEME: &str = "challenge";

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        CliError::config(e.to_string())
    }
}

impl From<FusionError> for CliError {
    fn from(e: FusionError) -> Self {
        CliError::config(e.to_string())
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
}

fn open(path: &Path) -> Result<BufReader<fs::File>, CliError> {
    fs::File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::config(format!("{}: {e}", path.display())))
}

/// Writes to `path`, or stdout when absent.
fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| CliError::config(format!("{}: {e}", p.display()))),
        // A closed pipe (`| head`) is not an error.
        None => match io::stdout().write_all(bytes) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(CliError::config(format!("stdout: {e}"))),
            _ => Ok(()),
        },
    }
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn load_scheme_file(path: &Path) -> Result<LevelScheme, CliError> {
    let text = read_text(path)?;
    let parsed = match TableFormat::from_path(path) {
        TableFormat::Json => serde_json::from_str(&text).map_err(|e| e.to_string()),
        TableFormat::Toml => toml::from_str(&text).map_err(|e| e.to_string()),
    };
    parsed.map_err(|e| CliError::config(format!("scheme file {}: {e}", path.display())))
}

fn load_table(path: &Path) -> Result<SeverityTable, CliError> {
    SeverityTable::load(path).map_err(|e| CliError::config(format!("severity table {}: {e}", path.display())))
}

pub fn distort(a: &DistortArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let c = &cfg.distort;
    let (scheme, scheme_source) = match (&a.scheme, &a.scheme_file) {
        (Some(name), _) => (builtin_scheme(name)?, json!(name)),
        (None, Some(path)) => (load_scheme_file(path)?, json!(path_str(path))),
        (None, None) => match (&c.scheme, &c.scheme_file) {
            (Some(_), Some(_)) => return Err(CliError::config("config sets both scheme and scheme_file")),
            (Some(name), None) => (builtin_scheme(name)?, json!(name)),
            (None, Some(path)) => (load_scheme_file(path)?, json!(path_str(path))),
            (None, None) => (builtin_scheme(DEFAULT_SCHEME)?, json!(DEFAULT_SCHEME)),
        },
    };
    scheme.validate()?;
    let table_path = a.severity_table.clone().or_else(|| c.severity_table.clone());
    let table = match &table_path {
        Some(p) => load_table(p)?,
        None => SeverityTable::builtin(scheme.num_levels).map_err(|e| CliError::config(e.to_string()))?,
    };
    let robust_fraction = a.robust_fraction.or(c.robust_fraction).unwrap_or(DEFAULT_ROBUST_FRACTION);
    let (seed, seed_source) = match (a.seed, c.seed) {
        (Some(s), _) => (s, "flag"),
        (None, Some(s)) => (s, "config"),
        (None, None) => (SeedSetting::Fixed(DEFAULT_SEED), "default"),
    };
    let global_seed = match seed {
        SeedSetting::Fixed(v) => v,
        SeedSetting::Random(_) => rand::random::<u64>(),
    };
    let jobs = a
        .jobs
        .or(c.jobs)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if jobs == 0 {
        return Err(CliError::config("--jobs must be at least 1"));
    }

    let entries = read_listing(open(&a.input)?)?;
    let input_root = a
        .input
        .parent()
        .map(Path::to_path_buf)
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or_else(|| PathBuf::from("."));
    let input_root = fs::canonicalize(&input_root).unwrap_or(input_root);
    // Worker count and output location do not affect the outputs, so they are
    // left out to keep manifests comparable across runs.
    let extra = json!({
        "command": "distort",
        "listing": path_str(&a.input),
        "scheme_source": scheme_source,
        "seed_source": seed_source,
        "severity_table_file": table_path.as_deref().map(path_str),
        "config_file": cfg.path.as_deref().map(path_str),
    });
    let outcome = run_batch(&BatchConfig {
        entries: &entries,
        input_root,
        output_dir: a.output.clone(),
        scheme: &scheme,
        table: &table,
        robust_fraction,
        global_seed,
        jobs,
        extra,
    })?;

    let s = &outcome.summary;
    println!("manifest: {}", outcome.manifest_path.display());
    println!("scheme: {}  seed: {global_seed}  robust fraction: {robust_fraction}", scheme.name);
    println!("images: {}  clean: {}  robust: {}  real: {}  fake: {}", s.total, s.clean, s.robust, s.real, s.fake);
    if !s.plan_lengths.is_empty() {
        let lens: Vec<String> = s.plan_lengths.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        println!("plan lengths: {}", lens.join(" "));
    }
    if !s.kinds.is_empty() {
        println!("kind usage:");
        let width = s.kinds.keys().map(String::len).max().unwrap_or(0);
        for (kind, n) in &s.kinds {
            println!("  {kind:<width$}  {n}");
        }
    }
    if s.failed > 0 {
        eprintln!("{} image(s) failed:", s.failed);
        for r in outcome.manifest.records.iter().filter(|r| r.error.is_some()) {
            eprintln!("  {}: {}", r.image_id, r.error.as_deref().unwrap_or_default());
        }
        return Err(CliError {
            code: CliError::PARTIAL,
            message: format!("{} of {} images failed", s.failed, s.total),
        });
    }
    Ok(())
}

fn builtin_scheme(name: &str) -> Result<LevelScheme, CliError> {
    LevelScheme::builtin(name).ok_or_else(|| {
        CliError::config(format!(
            "unknown scheme `{name}`; expected one of {}",
            LevelScheme::BUILTIN_NAMES.join(", ")
        ))
    })
}

fn read_manifest(path: &Path) -> Result<Manifest, CliError> {
    Ok(Manifest::read(open(path)?)?)
}

pub fn evaluate(a: &EvaluateArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let format = match (a.format, cfg.evaluate.format.as_deref()) {
        (Some(f), _) => f,
        (None, Some("json")) | (None, None) => ReportFormat::Json,
        (None, Some("csv")) => ReportFormat::Csv,
        (None, Some(other)) => return Err(CliError::config(format!("unknown report format `{other}`"))),
    };
    let manifest = read_manifest(&a.manifest)?;
    let preds = read_predictions(open(&a.predictions)?)
        .map_err(|e| CliError::config(format!("{}: {e}", a.predictions.display())))?;
    // Images that failed to render have no output to score.
    let failed: BTreeSet<&str> = manifest
        .records
        .iter()
        .filter(|r| r.error.is_some())
        .map(|r| r.image_id.as_str())
        .collect();
    let truth = manifest
        .records
        .iter()
        .filter(|r| r.error.is_none())
        .map(|r| (r.image_id.as_str(), r.label.is_fake(), r.track));
    let scored = preds
        .iter()
        .filter(|p| !failed.contains(p.image_id.as_str()))
        .map(|p| (p.image_id.as_str(), p.score));
    let report = eval_scores(truth, scored).map_err(|e| match e {
        MetricError::Alignment(diff) => CliError::config(format!("image ids do not match the manifest: {diff}")),
        other => CliError::config(other.to_string()),
    })?;

    let bytes = match format {
        ReportFormat::Json => {
            let run = &manifest.header.run;
            let mut v = serde_json::to_value(&report).expect("report serialises");
            v["config"] = json!({
                "command": "evaluate",
                "manifest": path_str(&a.manifest),
                "predictions": path_str(&a.predictions),
                "format": "json",
                "config_file": cfg.path.as_deref().map(path_str),
            });
            v["run"] = json!({
                "scheme": run.scheme.name,
                "global_seed": run.global_seed,
                "robust_fraction": run.robust_fraction,
            });
            v["excluded_failed"] = json!(failed);
            let mut out = serde_json::to_vec_pretty(&v).expect("report serialises");
            out.push(b'\n');
            out
        }
        ReportFormat::Csv => {
            let mut out = Vec::new();
            write_report_csv(&mut out, &report).map_err(|e| CliError::config(e.to_string()))?;
            out
        }
    };
    emit(a.output.as_deref(), &bytes)
}

fn named_fusion(name: &str, table: &ScoreTable) -> Result<FusionScheme, CliError> {
    Ok(match name {
        "average" => FusionScheme::Average {
            columns: table.columns.clone(),
        },
        "rapid" => FusionScheme::Rapid {
            columns: Default::default(),
        },
        "intsig" => FusionScheme::Intsig {
            gates: true,
            gate2_policy: Gate2Policy::default(),
            columns: Default::default(),
        },
        other => {
            return Err(CliError::config(format!(
                "unknown fusion scheme `{other}`; use average, rapid or intsig, or --scheme-config for the others"
            )))
        }
    })
}

pub fn fuse(a: &FuseArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let c = &cfg.fuse;
    let table = ScoreTable::read(open(&a.scores)?).map_err(|e| CliError::config(format!("{}: {e}", a.scores.display())))?;
    let mut scheme = match (&a.scheme, &a.scheme_config) {
        (Some(name), _) => named_fusion(name, &table)?,
        (None, Some(path)) => FusionScheme::from_json(&read_text(path)?)?,
        (None, None) => match (&c.scheme, &c.scheme_config) {
            (Some(_), Some(_)) => return Err(CliError::config("config sets both scheme and scheme_config")),
            (Some(name), None) => named_fusion(name, &table)?,
            (None, Some(path)) => FusionScheme::from_json(&read_text(path)?)?,
            (None, None) => return Err(CliError::config("no fusion scheme given; pass --scheme or --scheme-config")),
        },
    };
    let gates = a.gates.map(|g| g == Switch::On).or(c.gates);
    if let Some(on) = gates {
        match &mut scheme {
            FusionScheme::Intsig { gates, .. } => *gates = on,
            other => {
                return Err(CliError::config(format!(
                    "--gates applies to the intsig scheme, not `{}`",
                    other.name()
                )))
            }
        }
    }
    let fused = scheme.fuse(&table)?;
    let mut out = String::from("image_id,score\n");
    for (id, score) in fused {
        out.push_str(&format!("{id},{score}\n"));
    }
    emit(a.output.as_deref(), out.as_bytes())?;
    if a.output.is_some() {
        eprintln!("fused {} rows with scheme {}", table.ids.len(), scheme.name());
    }
    Ok(())
}

pub fn replay(a: &ReplayArgs) -> Result<(), CliError> {
    let manifest = read_manifest(&a.manifest)?;
    let manifest_dir = a.manifest.parent().map(Path::to_path_buf).unwrap_or_default();
    let table = SeverityTable::from_value(&manifest.header.run.severity_table)
        .map_err(|e| CliError::config(format!("manifest severity table: {e}")))?;
    let root = a
        .source_root
        .clone()
        .unwrap_or_else(|| PathBuf::from(&manifest.header.run.input_root));
    let records: Vec<_> = match &a.id {
        Some(id) => {
            let hits: Vec<_> = manifest.records.iter().filter(|r| &r.image_id == id).collect();
            if hits.is_empty() {
                return Err(CliError::config(format!("no record with image id `{id}`")));
            }
            hits
        }
        None => manifest.records.iter().collect(),
    };
    if let Some(dir) = &a.output_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::config(format!("{}: {e}", dir.display())))?;
    }
    let (mut matched, mut skipped, mut bad) = (0usize, 0usize, Vec::new());
    for r in records {
        if r.error.is_some() {
            skipped += 1;
            continue;
        }
        let checked = replay_record(r, &root, Some(&table))
            .map_err(|e| e.to_string())
            .and_then(|img| image_io::encode_png(&img).map_err(|e| e.to_string()))
            .and_then(|bytes| {
                let digest = sha256_hex(&bytes);
                if r.output_sha256.as_deref() != Some(digest.as_str()) {
                    return Err(format!("re-rendered digest {digest} differs from the manifest"));
                }
                if let Some(rel) = &r.output_path {
                    let on_disk = manifest_dir.join(rel);
                    if let Ok(existing) = fs::read(&on_disk) {
                        if sha256_hex(&existing) != digest {
                            return Err(format!("{} differs from the re-rendered image", on_disk.display()));
                        }
                    }
                }
                if let (Some(dir), Some(rel)) = (&a.output_dir, &r.output_path) {
                    let name = Path::new(rel).file_name().unwrap_or_default();
                    let dest = dir.join(name);
                    fs::write(&dest, &bytes).map_err(|e| format!("{}: {e}", dest.display()))?;
                }
                Ok(())
            });
        match checked {
            Ok(()) => matched += 1,
            Err(msg) => bad.push((r.image_id.clone(), msg)),
        }
    }
    println!("replayed: {matched} matched, {} mismatched, {skipped} skipped (failed at render time)", bad.len());
    if bad.is_empty() {
        return Ok(());
    }
    for (id, msg) in &bad {
        eprintln!("  {id}: {msg}");
    }
    Err(CliError {
        code: CliError::PARTIAL,
        message: format!("{} record(s) did not replay", bad.len()),
    })
}

pub fn severity_table(action: &TableAction) -> Result<(), CliError> {
    match action {
        TableAction::Show { levels, table, format } => {
            let t = match table {
                Some(p) => load_table(p)?,
                None => SeverityTable::builtin(*levels).map_err(|e| CliError::config(e.to_string()))?,
            };
            let text = match format {
                TableFormatArg::Toml => t.to_toml(),
                TableFormatArg::Json => t.to_json(),
            };
            emit(None, format!("{}\n", text.trim_end()).as_bytes())
        }
        TableAction::Validate { file } => {
            let t = load_table(file)?;
            println!("{}: ok ({} levels, {} kinds)", file.display(), t.num_levels(), t.kinds().count());
            Ok(())
        }
    }
}

