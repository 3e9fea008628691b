//! Optional TOML config file. Values given on the command line win over
//! the file, which wins over built-in defaults. Relative paths in the file
//! are taken relative to the file's directory.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

pub const CONFIG_ENV: &str = "WILDDISTORT_CONFIG";

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub distort: DistortSection,
    #[serde(default)]
    pub evaluate: EvaluateSection,
    #[serde(default)]
    pub fuse: FuseSection,
    #[serde(skip)]
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistortSection {
    pub scheme: Option<String>,
    pub scheme_file: Option<PathBuf>,
    pub robust_fraction: Option<f64>,
    pub seed: Option<SeedSetting>,
    pub jobs: Option<usize>,
    pub severity_table: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluateSection {
    pub format: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuseSection {
    pub scheme: Option<String>,
    pub scheme_config: Option<PathBuf>,
    pub gates: Option<bool>,
}

/// A fixed seed or a fresh one per run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeedSetting {
    Fixed(u64),
    Random(RandomWord),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RandomWord {
    Random,
}

impl std::str::FromStr for SeedSetting {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "random" {
            return Ok(SeedSetting::Random(RandomWord::Random));
        }
        s.parse::<u64>()
            .map(SeedSetting::Fixed)
            .map_err(|_| format!("seed must be an unsigned integer or `random`, got `{s}`"))
    }
}

impl ConfigFile {
    /// `explicit`, else the path in the environment variable, else empty.
    pub fn load(explicit: Option<&Path>) -> Result<Self, CliError> {
        let path = match explicit {
            Some(p) => Some(p.to_path_buf()),
            None => std::env::var_os(CONFIG_ENV).filter(|v| !v.is_empty()).map(PathBuf::from),
        };
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::config(format!("config {}: {e}", path.display())))?;
        let mut cfg: ConfigFile =
            toml::from_str(&text).map_err(|e| CliError::config(format!("config {}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let rebase = |p: &mut Option<PathBuf>| {
            if let Some(v) = p.as_mut() {
                if v.is_relative() {
                    *v = base.join(&*v);
                }
            }
        };
        rebase(&mut cfg.distort.scheme_file);
        rebase(&mut cfg.distort.severity_table);
        rebase(&mut cfg.fuse.scheme_config);
        cfg.path = Some(path);
        Ok(cfg)
    }
}
