//! Fading models for the three links and the water-scenario preset file.

pub mod alpha_mu;
pub mod egg;
pub mod presets;

use thiserror::Error;

use crate::specfn::SpecFnError;

pub use alpha_mu::{AlphaMuLink, AlphaMuSampler};
pub use egg::{EggLink, EggSampler};
pub use presets::{RfDefaults, WaterPresets, WaterScenario};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("invalid channel parameter: {0}")]
    InvalidParameter(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    SpecFn(#[from] SpecFnError),
    #[error("preset error: {0}")]
    Preset(String),
}
