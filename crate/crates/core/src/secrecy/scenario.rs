use serde::{Deserialize, Serialize};

use super::SecrecyError;
use crate::channels::{AlphaMuLink, EggLink};

/// Source-relay RF link, source-eavesdropper RF link, relay-destination UWOC
/// link and the target secrecy rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecrecyScenario {
    pub main_rf: AlphaMuLink,
    pub eavesdropper_rf: AlphaMuLink,
    pub uwoc: EggLink,
    /// Target secrecy rate, bits per channel use.
    pub rate_s: f64,
}

impl SecrecyScenario {
    pub fn new(
        main_rf: AlphaMuLink,
        eavesdropper_rf: AlphaMuLink,
        uwoc: EggLink,
        rate_s: f64,
    ) -> Result<Self, SecrecyError> {
        let s = Self {
            main_rf,
            eavesdropper_rf,
            uwoc,
            rate_s,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), SecrecyError> {
        self.main_rf.validate()?;
        self.eavesdropper_rf.validate()?;
        self.uwoc.validate()?;
        if !(self.rate_s >= 0.0) || !self.rate_s.is_finite() {
            return Err(SecrecyError::InvalidInput(format!(
                "rate_s must be finite and >= 0, got {}",
                self.rate_s
            )));
        }
        Ok(())
    }

    /// `Θ = 2^{R_s}`.
    pub fn theta(&self) -> f64 {
        self.rate_s.exp2()
    }

    pub fn with_main_snr(mut self, mean_snr: f64) -> Result<Self, SecrecyError> {
        self.main_rf = self.main_rf.with_mean_snr(mean_snr)?;
        Ok(self)
    }

    pub fn with_eve_snr(mut self, mean_snr: f64) -> Result<Self, SecrecyError> {
        self.eavesdropper_rf = self.eavesdropper_rf.with_mean_snr(mean_snr)?;
        Ok(self)
    }

    pub fn with_uwoc_snr(mut self, mu_r: f64) -> Result<Self, SecrecyError> {
        self.uwoc = self.uwoc.with_mu_r(mu_r)?;
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SopMethod {
    Exact,
    Oracle,
    AsymptoticMainHighSnr,
    AsymptoticEveHighSnr,
    Saturation,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SopResult {
    pub value: f64,
    pub method: SopMethod,
    pub est_error: f64,
}

impl SopResult {
    pub(crate) fn new(value: f64, method: SopMethod, est_error: f64) -> Self {
        Self {
            value,
            method,
            est_error,
        }
    }
}

/// Two additive pieces of `SOP = 1 + K1 + K2`: `K1` carries the
/// generalized-Gamma branch of the UWOC tail and `K2` the exponential branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KTerms {
    pub k1: f64,
    pub k1_error: f64,
    pub k2: f64,
    pub k2_error: f64,
}

impl KTerms {
    pub fn sop(&self) -> f64 {
        1.0 + self.k1 + self.k2
    }

    pub fn error(&self) -> f64 {
        self.k1_error + self.k2_error
    }
}
