//! α-μ fading for the RF hops (source-relay and source-eavesdropper).
//!
//! The canonical parametrization is the mean-true one used by every SOP formula
//! downstream: with `β = Γ(μ + 1/α) / Γ(μ)`, `Λ = β / γ̄` and `κ = Λ / Γ(μ)`,
//!
//! ```text
//! f(γ) = α κ (Λγ)^{αμ - 1} exp(-(Λγ)^α),     F̄(γ) = Γ(μ, (Λγ)^α) / Γ(μ)
//! ```
//!
//! so that `(Λγ)^α ~ Gamma(μ, 1)` and `E[γ] = γ̄`.

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use super::ChannelError;
use crate::specfn::{self, fox_h, gamma, ln_gamma, ContourSpec, FoxHParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaMuLink {
    pub alpha: f64,
    pub mu: f64,
    /// Mean SNR `γ̄`, linear scale.
    pub mean_snr: f64,
}

impl AlphaMuLink {
    pub fn new(alpha: f64, mu: f64, mean_snr: f64) -> Result<Self, ChannelError> {
        let link = Self { alpha, mu, mean_snr };
        link.validate()?;
        Ok(link)
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        for (name, v) in [("alpha", self.alpha), ("mu", self.mu), ("mean_snr", self.mean_snr)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(ChannelError::InvalidParameter(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }

    pub fn with_mean_snr(self, mean_snr: f64) -> Result<Self, ChannelError> {
        Self::new(self.alpha, self.mu, mean_snr)
    }

    pub fn beta(&self) -> f64 {
        (ln_gamma(self.mu + 1.0 / self.alpha) - ln_gamma(self.mu)).exp()
    }

    /// `Λ = β / γ̄`.
    pub fn lambda(&self) -> f64 {
        self.beta() / self.mean_snr
    }

    /// `κ = β / (Γ(μ) γ̄) = Λ / Γ(μ)`.
    pub fn kappa(&self) -> f64 {
        self.lambda() / gamma(self.mu)
    }

    pub fn pdf(&self, snr: f64) -> Result<f64, ChannelError> {
        let shape = self.alpha * self.mu;
        if snr < 0.0 || snr.is_nan() {
            return Err(ChannelError::Domain(format!("α-μ pdf needs snr >= 0, got {snr}")));
        }
        if snr == 0.0 {
            return if shape > 1.0 {
                Ok(0.0)
            } else if shape == 1.0 {
                Ok(self.alpha * self.kappa())
            } else {
                Err(ChannelError::Domain(
                    "α-μ density is unbounded at snr = 0 when αμ < 1".into(),
                ))
            };
        }
        let x = self.lambda() * snr;
        let ln = self.alpha.ln() + self.kappa().ln() + (shape - 1.0) * x.ln() - x.powf(self.alpha);
        Ok(ln.exp())
    }

    /// Density in the μ-form `α μ^μ γ^{αμ-1} / (Γ(μ) γ̄^{αμ}) exp(-μ (γ/γ̄)^α)`.
    ///
    /// This is a different family from [`AlphaMuLink::pdf`] unless `α = 1`; it is
    /// kept only for side-by-side comparison and is not used by any SOP route.
    pub fn pdf_mu_form(&self, snr: f64) -> f64 {
        if !(snr > 0.0) {
            return 0.0;
        }
        let (a, m, g) = (self.alpha, self.mu, self.mean_snr);
        let ln = a.ln() + m * m.ln() - ln_gamma(m) - a * m * g.ln() + (a * m - 1.0) * snr.ln() - m * (snr / g).powf(a);
        ln.exp()
    }

    pub fn ccdf(&self, snr: f64) -> Result<f64, ChannelError> {
        if snr < 0.0 || snr.is_nan() {
            return Err(ChannelError::Domain(format!("α-μ ccdf needs snr >= 0, got {snr}")));
        }
        if snr == 0.0 {
            return Ok(1.0);
        }
        let x = (self.lambda() * snr).powf(self.alpha);
        Ok(specfn::regularized_upper_gamma(self.mu, x)?)
    }

    pub fn cdf(&self, snr: f64) -> Result<f64, ChannelError> {
        Ok(1.0 - self.ccdf(snr)?)
    }

    /// CCDF through `γκ H^{2,0}_{1,2}[γΛ | (0,1); (-1,1), (μ - 1/α, 1/α)]`.
    pub fn ccdf_fox_h(&self, snr: f64, contour: &ContourSpec) -> Result<f64, ChannelError> {
        if snr < 0.0 || snr.is_nan() {
            return Err(ChannelError::Domain(format!("α-μ ccdf needs snr >= 0, got {snr}")));
        }
        if snr == 0.0 {
            return Ok(1.0);
        }
        let h = fox_h(&self.ccdf_h_params(), snr * self.lambda(), contour)?;
        Ok(snr * self.kappa() * h)
    }

    pub fn ccdf_h_params(&self) -> FoxHParams {
        FoxHParams {
            m: 2,
            n: 0,
            upper: vec![(0.0, 1.0)],
            lower: vec![(-1.0, 1.0), (self.mu - 1.0 / self.alpha, 1.0 / self.alpha)],
        }
    }

    /// `H^{2,0}_{1,2}[· | (1,1); (0,1), (μ, 1/α)]`, equal to `Γ(μ, (·)^α)`.
    pub fn tail_h_params(&self) -> FoxHParams {
        FoxHParams {
            m: 2,
            n: 0,
            upper: vec![(1.0, 1.0)],
            lower: vec![(0.0, 1.0), (self.mu, 1.0 / self.alpha)],
        }
    }

    pub fn sampler(&self) -> AlphaMuSampler {
        AlphaMuSampler {
            gamma: Gamma::new(self.mu, 1.0).expect("validated shape"),
            inv_alpha: 1.0 / self.alpha,
            inv_lambda: 1.0 / self.lambda(),
        }
    }

    /// One SNR draw. For repeated draws build a [`AlphaMuSampler`] once.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.sampler().sample(rng)
    }
}

/// `γ = W^{1/α} / Λ` with `W ~ Gamma(μ, 1)`.
#[derive(Debug, Clone, Copy)]
pub struct AlphaMuSampler {
    gamma: Gamma<f64>,
    inv_alpha: f64,
    inv_lambda: f64,
}

impl AlphaMuSampler {
    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let w: f64 = self.gamma.sample(rng);
        w.powf(self.inv_alpha) * self.inv_lambda
    }
}
