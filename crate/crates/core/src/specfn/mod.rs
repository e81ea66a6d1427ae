//! Special functions: complex log-Gamma, incomplete Gamma, adaptive quadrature
//! and the Mellin–Barnes engine for univariate and bivariate Fox H-functions.

pub mod bivariate;
pub mod foxh;
pub mod gamma;
pub mod quad;

use thiserror::Error;

pub use bivariate::{fox_h_bivariate, fox_h_bivariate_detailed, BivarEvaluation, BivarFoxHParams};
pub use foxh::{fox_h, fox_h_detailed, ContourSpec, FoxHParams, HEvaluation};
pub use gamma::{gamma, ln_gamma, ln_gamma_complex, regularized_upper_gamma, upper_incomplete_gamma};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFnError {
    #[error("Gamma pole at {re} + {im}i")]
    Pole { re: f64, im: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no separating contour: {0}")]
    ContourInfeasible(String),
    #[error("quadrature did not converge (estimate {estimate}, error {error})")]
    NotConverged { estimate: f64, error: f64 },
}
