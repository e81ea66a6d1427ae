//! Figure preset files.
//!
//! A preset is one TOML file describing a family of SNR sweeps that share a
//! grid and a method set; each `[[curve]]` becomes one [`SweepSpec`].
//!
//! ```toml
//! name = "fig1"
//! description = "..."               # optional
//! water = "water.toml"              # relative to this file
//! axis = "main_snr_db"              # or "eve_snr_db"
//! rate_s = 0.5
//! methods = ["exact", "asymptotic", "saturation", "oracle", "mc"]
//!
//! [grid]
//! start = -20.0
//! stop = 40.0
//! step = 2.5
//!
//! [main]                            # alpha/mu default to the water file's [rf]
//! alpha = 1.2
//! mu = 0.5
//! snr_db = 0.0                      # ignored when this is the swept axis
//!
//! [eve]
//! alpha = 1.2
//! mu = 0.5
//! snr_db = -20.0
//!
//! [uwoc]
//! snr_db = -20.0                    # μ_r in dB
//! r = 2                             # optional, default 2
//!
//! [mc]                              # optional
//! trials = 10000000
//! seed = 2024
//! chunk_size = 100000
//! mode = "lower_bound"              # or "exact_definition"
//!
//! [[curve]]
//! label = "[2.4, 0.05]"
//! water = "[2.4, 0.05]"             # scenario label in the water file
//! eve_snr_db = -10.0                # optional per-curve overrides
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::sweep::{Grid, Method, SweepAxis, SweepSpec};
use super::CliError;
use crate::channels::{AlphaMuLink, WaterPresets};
use crate::mc::{McConfig, McMode};
use crate::secrecy::{db_to_linear, SecrecyScenario};

/// Environment variable naming an extra preset search directory.
pub const PRESET_DIR_ENV: &str = "RFUWOC_PRESET_DIR";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RfSection {
    pub alpha: Option<f64>,
    pub mu: Option<f64>,
    pub snr_db: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UwocSection {
    pub snr_db: f64,
    #[serde(default = "default_r")]
    pub r: u8,
}

fn default_r() -> u8 {
    2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McSection {
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub chunk_size: Option<u64>,
    pub mode: Option<McMode>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSection {
    pub label: String,
    pub water: String,
    pub main_snr_db: Option<f64>,
    pub eve_snr_db: Option<f64>,
    pub uwoc_snr_db: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FigurePreset {
    pub name: String,
    pub description: Option<String>,
    pub water: PathBuf,
    pub axis: SweepAxis,
    pub rate_s: f64,
    pub methods: Vec<Method>,
    pub grid: Grid,
    pub main: RfSection,
    pub eve: RfSection,
    pub uwoc: UwocSection,
    pub mc: Option<McSection>,
    #[serde(rename = "curve")]
    pub curves: Vec<CurveSection>,
}

/// A parsed preset together with the water file it points at.
#[derive(Debug, Clone)]
pub struct LoadedPreset {
    pub path: PathBuf,
    pub preset: FigurePreset,
    pub water: WaterPresets,
}

impl FigurePreset {
    pub fn from_toml_str(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Shape checks that need no other file.
    pub fn validate_schema(&self) -> Result<(), CliError> {
        let cfg = |key: &str, msg: String| Err(CliError::Config(format!("{key}: {msg}")));
        if self.methods.is_empty() {
            return cfg("methods", "must list at least one method".into());
        }
        self.grid.validate()?;
        if !(self.rate_s >= 0.0) || !self.rate_s.is_finite() {
            return cfg("rate_s", format!("must be finite and >= 0, got {}", self.rate_s));
        }
        if self.curves.is_empty() {
            return cfg("curve", "at least one [[curve]] is required".into());
        }
        if self.uwoc.r != 1 && self.uwoc.r != 2 {
            return cfg("uwoc.r", format!("must be 1 or 2, got {}", self.uwoc.r));
        }
        for (key, sec) in [("main", &self.main), ("eve", &self.eve)] {
            for (field, v) in [("alpha", sec.alpha), ("mu", sec.mu)] {
                if let Some(v) = v {
                    if !(v > 0.0) || !v.is_finite() {
                        return cfg(&format!("{key}.{field}"), format!("must be positive, got {v}"));
                    }
                }
            }
        }
        let fixed_key = match self.axis {
            SweepAxis::MainSnrDb => ("eve.snr_db", &self.eve),
            SweepAxis::EveSnrDb => ("main.snr_db", &self.main),
        };
        let mut labels = std::collections::HashSet::new();
        for (i, c) in self.curves.iter().enumerate() {
            if !labels.insert(c.label.as_str()) {
                return cfg(&format!("curve[{i}].label"), format!("duplicate label {:?}", c.label));
            }
            let fixed_override = match self.axis {
                SweepAxis::MainSnrDb => c.eve_snr_db,
                SweepAxis::EveSnrDb => c.main_snr_db,
            };
            if fixed_override.is_none() && fixed_key.1.snr_db.is_none() {
                return cfg(fixed_key.0, format!("required because curve[{i}] does not override it"));
            }
        }
        if let Some(mc) = &self.mc {
            if mc.chunk_size == Some(0) {
                return cfg("mc.chunk_size", "must be positive".into());
            }
            if let Some(t) = mc.trials {
                if t < crate::mc::MIN_TRIALS {
                    return cfg("mc.trials", format!("must be >= {}, got {t}", crate::mc::MIN_TRIALS));
                }
            }
        }
        Ok(())
    }

    pub fn mc_config(&self) -> McConfig {
        let d = McConfig::default();
        match &self.mc {
            None => d,
            Some(m) => McConfig {
                trials: m.trials.unwrap_or(d.trials),
                master_seed: m.seed.unwrap_or(d.master_seed),
                chunk_size: m.chunk_size.unwrap_or(d.chunk_size),
                mode: m.mode.unwrap_or(d.mode),
            },
        }
    }
}

impl LoadedPreset {
    /// Parse the preset at `path`, resolve its water file and check every
    /// curve against it.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let preset =
            FigurePreset::from_toml_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        preset
            .validate_schema()
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let water_path = path.parent().unwrap_or(Path::new(".")).join(&preset.water);
        let water = WaterPresets::load(&water_path).map_err(|e| CliError::Config(format!("water: {e}")))?;
        let loaded = Self {
            path: path.to_path_buf(),
            preset,
            water,
        };
        loaded.specs()?;
        Ok(loaded)
    }

    /// One sweep per curve, in file order.
    pub fn specs(&self) -> Result<Vec<SweepSpec>, CliError> {
        let p = &self.preset;
        let rf = self.water.rf;
        let shape = |sec: &RfSection, key: &str| -> Result<(f64, f64), CliError> {
            let alpha = sec.alpha.or(rf.map(|r| r.alpha));
            let mu = sec.mu.or(rf.map(|r| r.mu));
            match (alpha, mu) {
                (Some(a), Some(m)) => Ok((a, m)),
                _ => Err(CliError::Config(format!(
                    "{key}.alpha/{key}.mu: missing and no [rf] defaults in water file"
                ))),
            }
        };
        let (ma, mm) = shape(&p.main, "main")?;
        let (ea, em) = shape(&p.eve, "eve")?;
        let mc = p.methods.contains(&Method::Mc).then(|| p.mc_config());
        p.curves
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let key = format!("curve[{i}]");
                let water = self
                    .water
                    .get(&c.water)
                    .ok_or_else(|| CliError::Config(format!("{key}.water: unknown scenario {:?}", c.water)))?;
                // the swept axis value is filled in per grid point
                let main_db = c.main_snr_db.or(p.main.snr_db).unwrap_or(0.0);
                let eve_db = c.eve_snr_db.or(p.eve.snr_db).unwrap_or(0.0);
                let uwoc_db = c.uwoc_snr_db.unwrap_or(p.uwoc.snr_db);
                let err = |e: &dyn std::fmt::Display| CliError::Config(format!("{key}: {e}"));
                let scenario = SecrecyScenario::new(
                    AlphaMuLink::new(ma, mm, db_to_linear(main_db)).map_err(|e| err(&e))?,
                    AlphaMuLink::new(ea, em, db_to_linear(eve_db)).map_err(|e| err(&e))?,
                    water.egg(p.uwoc.r, db_to_linear(uwoc_db)).map_err(|e| err(&e))?,
                    p.rate_s,
                )
                .map_err(|e| err(&e))?;
                Ok(SweepSpec {
                    label: c.label.clone(),
                    scenario,
                    axis: p.axis,
                    grid: p.grid,
                    methods: p.methods.iter().copied().collect(),
                    mc,
                })
            })
            .collect()
    }
}

/// Directories searched for a preset given by name, in priority order.
pub fn search_dirs() -> Vec<PathBuf> {
    let mut dirs = Vec::new();
    if let Some(d) = std::env::var_os(PRESET_DIR_ENV) {
        dirs.push(PathBuf::from(d));
    }
    dirs.push(PathBuf::from("presets"));
    dirs.push(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../presets"));
    dirs
}

/// `name_or_path` is used as-is when it names an existing file, otherwise it is
/// looked up as `<dir>/<name>.toml` in [`search_dirs`].
pub fn resolve(name_or_path: &str) -> Result<PathBuf, CliError> {
    let direct = PathBuf::from(name_or_path);
    if direct.is_file() {
        return Ok(direct);
    }
    let file = if name_or_path.ends_with(".toml") {
        name_or_path.to_string()
    } else {
        format!("{name_or_path}.toml")
    };
    let dirs = search_dirs();
    dirs.iter().map(|d| d.join(&file)).find(|p| p.is_file()).ok_or_else(|| {
        let tried: Vec<String> = dirs.iter().map(|d| d.display().to_string()).collect();
        CliError::Config(format!(
            "preset {name_or_path:?} not found (searched {})",
            tried.join(", ")
        ))
    })
}
