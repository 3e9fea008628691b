//! Severity tables: per-kind parameter records for levels `1..=num_levels`.
//!
//! Config documents (TOML or JSON) have the shape
//!
//! ```toml
//! num_levels = 5            # optional, 3 or 5 selects the built-in base
//! [kinds]
//! gaussian_blur = [{ sigma = 0.8 }, { sigma = 1.6 }, { sigma = 2.4 }, { sigma = 3.6 }, { sigma = 5.0 }]
//! jpeg_compression = [{ quality = 80 }, { quality = 55 }, { quality = 35 }, { quality = 18 }, { quality = 8 }]
//! ```
//!
//! Kinds not listed keep their built-in rows. Every row is validated: range
//! checks, no pre-resolved random fields, no unknown keys, and levels must be
//! ordered by non-decreasing severity.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{json, Map, Value};

use super::{DistortionError, DistortionKind, DistortionSpec, Params};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Toml,
    Json,
}

impl TableFormat {
    pub fn from_path(path: &Path) -> TableFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => TableFormat::Json,
            _ => TableFormat::Toml,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeverityTable {
    num_levels: u8,
    rows: BTreeMap<DistortionKind, Vec<Params>>,
}

fn five_level_defaults() -> BTreeMap<DistortionKind, Vec<Params>> {
    use DistortionKind as K;
    use Params as P;
    let mut t = BTreeMap::new();
    let f = |vals: [f64; 5], make: fn(f64) -> Params| vals.map(make).to_vec();
    t.insert(K::GaussianBlur, f([0.8, 1.6, 2.4, 3.6, 5.0], |sigma| P::GaussianBlur { sigma }));
    t.insert(K::LensBlur, f([1.0, 2.0, 3.0, 4.5, 6.0], |radius| P::LensBlur { radius }));
    t.insert(
        K::MotionBlur,
        f([3.0, 5.0, 8.0, 12.0, 17.0], |length| P::MotionBlur {
            length,
            angle_deg: None,
        }),
    );
    t.insert(
        K::GlassBlur,
        [(0.7, 1, 2), (0.9, 2, 1), (1.0, 2, 3), (1.1, 3, 2), (1.5, 4, 2)]
            .map(|(sigma, delta, iterations)| P::GlassBlur {
                sigma,
                delta,
                iterations,
            })
            .to_vec(),
    );
    t.insert(K::Pixelate, [2, 3, 4, 6, 8].map(|block| P::Pixelate { block }).to_vec());
    t.insert(K::WhiteNoise, f([0.02, 0.04, 0.07, 0.10, 0.14], |sigma| P::WhiteNoise { sigma }));
    t.insert(
        K::ImpulseNoise,
        f([0.01, 0.03, 0.07, 0.12, 0.2], |density| P::ImpulseNoise { density }),
    );
    t.insert(
        K::MultiplicativeNoise,
        f([0.05, 0.1, 0.18, 0.27, 0.4], |sigma| P::MultiplicativeNoise { sigma }),
    );
    t.insert(
        K::ShotNoise,
        f([250.0, 120.0, 60.0, 25.0, 12.0], |photons| P::ShotNoise { photons }),
    );
    t.insert(K::IsoNoise, f([0.02, 0.04, 0.06, 0.09, 0.12], |sigma| P::IsoNoise { sigma }));
    t.insert(
        K::ColorShift,
        f([6.0, 12.0, 20.0, 30.0, 45.0], |hue_deg| P::ColorShift {
            hue_deg,
            shift_deg: None,
        }),
    );
    t.insert(
        K::ColorSaturation,
        f([0.8, 0.6, 0.4, 0.2, 0.0], |factor| P::ColorSaturation { factor }),
    );
    t.insert(
        K::ColorJitter,
        f([0.05, 0.1, 0.2, 0.3, 0.4], |strength| P::ColorJitter {
            strength,
            factors: None,
        }),
    );
    t.insert(
        K::ColorQuantization,
        [32, 16, 8, 4, 2].map(|bins| P::ColorQuantization { bins }).to_vec(),
    );
    t.insert(
        K::RgbChannelShift,
        [1, 2, 3, 5, 8]
            .map(|shift| P::RgbChannelShift {
                shift,
                offsets: None,
            })
            .to_vec(),
    );
    t.insert(
        K::ColorCast,
        f([0.03, 0.06, 0.1, 0.15, 0.2], |magnitude| P::ColorCast {
            magnitude,
            tint: None,
        }),
    );
    t.insert(
        K::BrightnessIncrease,
        f([10.0, 25.0, 45.0, 70.0, 100.0], |delta| P::BrightnessIncrease { delta }),
    );
    t.insert(
        K::BrightnessDecrease,
        f([10.0, 25.0, 45.0, 70.0, 100.0], |delta| P::BrightnessDecrease { delta }),
    );
    t.insert(
        K::LinearContrastChange,
        f([0.85, 0.7, 0.55, 0.4, 0.25], |factor| P::LinearContrastChange { factor }),
    );
    t.insert(
        K::RandomToneCurve,
        f([0.02, 0.04, 0.06, 0.08, 0.11], |strength| P::RandomToneCurve {
            strength,
            points: None,
        }),
    );
    t.insert(
        K::Clahe,
        f([1.5, 2.5, 4.0, 6.0, 10.0], |clip_limit| P::Clahe { clip_limit, tiles: 8 }),
    );
    t.insert(
        K::JpegCompression,
        [80, 55, 35, 18, 8].map(|quality| P::JpegCompression { quality }).to_vec(),
    );
    t.insert(
        K::MultipleJpegCompressions,
        vec![vec![85, 75], vec![70, 55], vec![55, 40], vec![40, 30, 25], vec![25, 15, 10]]
            .into_iter()
            .map(|qualities| P::MultipleJpegCompressions { qualities })
            .collect(),
    );
    t.insert(
        K::RandomCrop,
        f([0.9, 0.8, 0.7, 0.6, 0.5], |keep| P::RandomCrop { keep, window: None }),
    );
    t.insert(
        K::RandomAspectCrop,
        f([0.1, 0.2, 0.3, 0.4, 0.5], |trim| P::RandomAspectCrop {
            trim,
            axis: None,
            window: None,
        }),
    );
    t.insert(
        K::Downscale,
        f([0.85, 0.7, 0.5, 0.35, 0.25], |factor| P::Downscale { factor }),
    );
    t.insert(
        K::PerspectiveTransform,
        f([0.02, 0.04, 0.07, 0.1, 0.14], |jitter| P::PerspectiveTransform {
            jitter,
            corners: None,
        }),
    );
    t.insert(
        K::SquishResize,
        vec![
            P::SquishResize {
                width: 384,
                height: 384
            };
            5
        ],
    );
    t
}

impl SeverityTable {
    /// Built-in defaults. Five levels is the base ramp; three levels keeps
    /// levels 1, 3 and 5 of it.
    pub fn builtin(num_levels: u8) -> Result<Self, DistortionError> {
        let five = five_level_defaults();
        let rows = match num_levels {
            5 => five,
            3 => five
                .into_iter()
                .map(|(k, v)| (k, vec![v[0].clone(), v[2].clone(), v[4].clone()]))
                .collect(),
            n => {
                return Err(DistortionError::Config(format!(
                    "no built-in table with {n} levels (available: 3, 5)"
                )))
            }
        };
        Ok(Self { num_levels, rows })
    }

    pub fn num_levels(&self) -> u8 {
        self.num_levels
    }

    pub fn kinds(&self) -> impl Iterator<Item = DistortionKind> + '_ {
        self.rows.keys().copied()
    }

    pub fn levels(&self, kind: DistortionKind) -> Result<&[Params], DistortionError> {
        self.rows
            .get(&kind)
            .map(Vec::as_slice)
            .ok_or(DistortionError::MissingKind(kind))
    }

    /// Exact table entry for `(kind, level)`.
    pub fn params(&self, kind: DistortionKind, level: u8) -> Result<&Params, DistortionError> {
        let rows = self.levels(kind)?;
        if level == 0 || level as usize > rows.len() {
            return Err(DistortionError::LevelOutOfRange {
                kind,
                level,
                num_levels: self.num_levels,
            });
        }
        Ok(&rows[level as usize - 1])
    }

    pub fn spec(&self, kind: DistortionKind, level: u8) -> Result<DistortionSpec, DistortionError> {
        Ok(DistortionSpec::new(self.params(kind, level)?.clone(), level))
    }

    pub fn validate(&self) -> Result<(), DistortionError> {
        for &kind in DistortionKind::ALL {
            let rows = self.levels(kind)?;
            check_rows(kind, rows, self.num_levels)?;
        }
        Ok(())
    }

    /// Built-in base overridden by the kinds listed in `text`.
    pub fn from_config_str(text: &str, format: TableFormat) -> Result<Self, DistortionError> {
        let doc: Value = match format {
            TableFormat::Toml => toml::from_str(text).map_err(|e| DistortionError::Config(e.to_string()))?,
            TableFormat::Json => {
                serde_json::from_str(text).map_err(|e| DistortionError::Config(e.to_string()))?
            }
        };
        Self::from_value(&doc)
    }

    /// Same schema as [`SeverityTable::from_config_str`], already parsed.
    pub fn from_value(doc: &Value) -> Result<Self, DistortionError> {
        let obj = doc
            .as_object()
            .ok_or_else(|| DistortionError::Config("document must be a table".into()))?;
        for key in obj.keys() {
            if key != "num_levels" && key != "kinds" {
                return Err(DistortionError::Config(format!("unknown top-level key `{key}`")));
            }
        }
        let num_levels = match obj.get("num_levels") {
            None => 5,
            Some(v) => v
                .as_u64()
                .filter(|n| (1..=255).contains(n))
                .ok_or_else(|| DistortionError::Config(format!("num_levels must be a positive integer, got {v}")))?
                as u8,
        };
        let mut table = match SeverityTable::builtin(num_levels) {
            Ok(t) => t,
            Err(_) => SeverityTable {
                num_levels,
                rows: BTreeMap::new(),
            },
        };
        let empty = Map::new();
        let kinds = match obj.get("kinds") {
            None => &empty,
            Some(v) => v
                .as_object()
                .ok_or_else(|| DistortionError::Config("`kinds` must be a table".into()))?,
        };
        table.merge(kinds)?;
        table.validate()?;
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<Self, DistortionError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| DistortionError::Config(format!("{}: {e}", path.display())))?;
        Self::from_config_str(&text, TableFormat::from_path(path))
    }

    fn merge(&mut self, kinds: &Map<String, Value>) -> Result<(), DistortionError> {
        for (name, rows) in kinds {
            let kind: DistortionKind = name
                .parse()
                .map_err(|e: super::UnknownKind| DistortionError::Config(e.to_string()))?;
            let rows = rows
                .as_array()
                .ok_or_else(|| DistortionError::Config(format!("{name}: expected a list of level records")))?;
            let parsed = rows
                .iter()
                .enumerate()
                .map(|(i, row)| parse_row(kind, row).map_err(|e| DistortionError::Config(format!("{name}[{}]: {e}", i + 1))))
                .collect::<Result<Vec<_>, _>>()?;
            self.rows.insert(kind, parsed);
        }
        Ok(())
    }

    /// The config document describing this table in full.
    pub fn to_value(&self) -> Value {
        let mut kinds = Map::new();
        for (kind, rows) in &self.rows {
            let rows: Vec<Value> = rows
                .iter()
                .map(|p| serde_json::to_value(p).expect("params serialise")["params"].clone())
                .collect();
            kinds.insert(kind.name().to_string(), Value::Array(rows));
        }
        json!({ "num_levels": self.num_levels, "kinds": kinds })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("table serialises")
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&self.to_value()).expect("table serialises")
    }
}

fn parse_row(kind: DistortionKind, row: &Value) -> Result<Params, String> {
    let provided = row.as_object().ok_or("expected a table")?;
    let params: Params = serde_json::from_value(json!({ "kind": kind.name(), "params": row }))
        .map_err(|e| e.to_string())?;
    let table_fields = serde_json::to_value(params.base()).map_err(|e| e.to_string())?;
    let table_fields = table_fields["params"].as_object().cloned().unwrap_or_default();
    if let Some(extra) = provided.keys().find(|k| !table_fields.contains_key(*k)) {
        return Err(if params.base() != params {
            format!("field `{extra}` is drawn per application and cannot be set")
        } else {
            format!("unknown field `{extra}`")
        });
    }
    Ok(params)
}

fn check_rows(kind: DistortionKind, rows: &[Params], num_levels: u8) -> Result<(), DistortionError> {
    if rows.len() != num_levels as usize {
        return Err(DistortionError::Config(format!(
            "{kind}: expected {num_levels} levels, found {}",
            rows.len()
        )));
    }
    for (i, p) in rows.iter().enumerate() {
        if p.kind() != kind {
            return Err(DistortionError::Config(format!("{kind}: level {} holds {}", i + 1, p.kind())));
        }
        if p.base() != *p {
            return Err(DistortionError::Config(format!(
                "{kind}: level {} contains per-application fields",
                i + 1
            )));
        }
        p.validate()?;
    }
    for (i, pair) in rows.windows(2).enumerate() {
        if pair[1].magnitude() < pair[0].magnitude() {
            return Err(DistortionError::Config(format!(
                "{kind}: level {} is milder than level {}",
                i + 2,
                i + 1
            )));
        }
    }
    Ok(())
}
