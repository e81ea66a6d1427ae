//! Secrecy outage probability (lower bound) of the DF relay by closed form,
//! quadrature oracle and high-SNR asymptotics.

pub mod asymptotic;
pub mod exact;
pub mod oracle;
pub mod scenario;

use thiserror::Error;

use crate::channels::ChannelError;
use crate::specfn::{ContourSpec, SpecFnError};

pub use asymptotic::{main_expansion, sop_asymptotic_eve, sop_asymptotic_main, sop_saturation, MainExpansion};
pub use exact::{k_terms_exact, sop_exact, sop_exact_unchecked, sop_exact_with, Contours};
pub use oracle::{end_to_end_cdf, end_to_end_cdf_hform, k_terms_oracle, sop_oracle};
pub use scenario::{KTerms, SecrecyScenario, SopMethod, SopResult};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SecrecyError {
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    SpecFn(#[from] SpecFnError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("quadrature did not converge (estimate {estimate}, error {error})")]
    NotConverged { estimate: f64, error: f64 },
    #[error("closed form {exact} disagrees with oracle {oracle} beyond {tolerance}")]
    OracleDisagreement { exact: f64, oracle: f64, tolerance: f64 },
    #[error("no grid point within {rel_eps} of the saturation floor {floor}")]
    NoSaturationOnGrid { rel_eps: f64, floor: f64 },
}

/// Smallest main-link mean SNR (dB) on `grid_db` whose exact SOP lies within
/// `rel_eps` (relative) of the saturation floor.
pub fn optimal_transmit_power(s: &SecrecyScenario, rel_eps: f64, grid_db: &[f64]) -> Result<f64, SecrecyError> {
    if !(rel_eps > 0.0) {
        return Err(SecrecyError::InvalidInput(format!(
            "rel_eps must be positive, got {rel_eps}"
        )));
    }
    if grid_db.is_empty() || grid_db.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(SecrecyError::InvalidInput(
            "grid must be non-empty and strictly ascending".into(),
        ));
    }
    let floor = sop_saturation(s, &ContourSpec::univariate())?.value;
    let contours = Contours::default();
    for &db in grid_db {
        let point = s.with_main_snr(db_to_linear(db))?;
        let exact = sop_exact(&point, &contours)?.value;
        if (exact - floor) / floor <= rel_eps {
            return Ok(db);
        }
    }
    Err(SecrecyError::NoSaturationOnGrid { rel_eps, floor })
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}
