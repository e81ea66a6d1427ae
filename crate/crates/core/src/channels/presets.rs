//! Water-scenario preset file.
//!
//! ```toml
//! [rf]                # default α-μ shape for both RF links
//! alpha = 1.2
//! mu = 0.5
//!
//! [[scenario]]
//! label = "[2.4, 0.05]"   # [air-bubble level, temperature gradient]
//! omega = 0.2130
//! lambda = 0.3291
//! a = 1.4299
//! b = 1.1817
//! c = 17.1984
//! verified = true         # optional, default false
//! note = "..."            # optional
//! ```

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ChannelError, EggLink};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RfDefaults {
    pub alpha: f64,
    pub mu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaterScenario {
    pub label: String,
    pub omega: f64,
    pub lambda: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    #[serde(default)]
    pub verified: bool,
    #[serde(default)]
    pub note: Option<String>,
}

impl WaterScenario {
    pub fn egg(&self, r: u8, mu_r: f64) -> Result<EggLink, ChannelError> {
        EggLink::new(self.omega, self.lambda, self.a, self.b, self.c, r, mu_r)
            .map_err(|e| ChannelError::Preset(format!("scenario {:?}: {e}", self.label)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaterPresets {
    pub rf: Option<RfDefaults>,
    #[serde(rename = "scenario")]
    pub scenarios: Vec<WaterScenario>,
}

impl WaterPresets {
    pub fn from_toml_str(text: &str) -> Result<Self, ChannelError> {
        let presets: Self = toml::from_str(text).map_err(|e| ChannelError::Preset(e.to_string()))?;
        presets.validate()?;
        Ok(presets)
    }

    pub fn load(path: &Path) -> Result<Self, ChannelError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| ChannelError::Preset(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text).map_err(|e| ChannelError::Preset(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        let mut seen = HashSet::new();
        for (i, s) in self.scenarios.iter().enumerate() {
            if !seen.insert(s.label.as_str()) {
                return Err(ChannelError::Preset(format!(
                    "scenario[{i}].label: duplicate label {:?}",
                    s.label
                )));
            }
            s.egg(2, 1.0)
                .map_err(|e| ChannelError::Preset(format!("scenario[{i}]: {e}")))?;
        }
        if let Some(rf) = self.rf {
            if !(rf.alpha > 0.0 && rf.mu > 0.0) {
                return Err(ChannelError::Preset("rf: alpha and mu must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn get(&self, label: &str) -> Option<&WaterScenario> {
        self.scenarios.iter().find(|s| s.label == label)
    }
}
