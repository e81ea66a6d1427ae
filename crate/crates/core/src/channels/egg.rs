//! Exponential–generalized-Gamma (EGG) turbulence on the underwater optical hop.
//!
//! Irradiance `I` is a mixture of `Exp(mean λ)` (weight ω) and the generalized
//! Gamma `b G^{1/c}`, `G ~ Gamma(a, 1)`. The electrical SNR is `γ = μ_r I^r`
//! with `r = 1` for heterodyne and `r = 2` for IM/DD detection.

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use super::ChannelError;
use crate::specfn::{ln_gamma, regularized_upper_gamma};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EggLink {
    pub omega: f64,
    pub lambda: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Detection exponent, 1 or 2.
    pub r: u8,
    /// Average electrical SNR, linear scale.
    pub mu_r: f64,
}

impl EggLink {
    pub fn new(omega: f64, lambda: f64, a: f64, b: f64, c: f64, r: u8, mu_r: f64) -> Result<Self, ChannelError> {
        let link = Self {
            omega,
            lambda,
            a,
            b,
            c,
            r,
            mu_r,
        };
        link.validate()?;
        Ok(link)
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        if !(0.0..=1.0).contains(&self.omega) {
            return Err(ChannelError::InvalidParameter(format!(
                "omega must lie in [0, 1], got {}",
                self.omega
            )));
        }
        for (name, v) in [
            ("lambda", self.lambda),
            ("a", self.a),
            ("b", self.b),
            ("c", self.c),
            ("mu_r", self.mu_r),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(ChannelError::InvalidParameter(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if self.r != 1 && self.r != 2 {
            return Err(ChannelError::InvalidParameter(format!(
                "r must be 1 or 2, got {}",
                self.r
            )));
        }
        Ok(())
    }

    pub fn with_mu_r(self, mu_r: f64) -> Result<Self, ChannelError> {
        Self { mu_r, ..self }.validate().map(|_| Self { mu_r, ..self })
    }

    pub fn r_f64(&self) -> f64 {
        f64::from(self.r)
    }

    /// Argument `γ^{c/r} / (b^c μ_r^{c/r})` of the generalized-Gamma tail.
    #[inline]
    fn gg_arg(&self, snr: f64) -> f64 {
        (snr / (self.b.powf(self.r_f64()) * self.mu_r)).powf(self.c / self.r_f64())
    }

    /// `(γ/μ_r)^{1/r}`, the irradiance for a given SNR.
    #[inline]
    fn irradiance(&self, snr: f64) -> f64 {
        (snr / self.mu_r).powf(1.0 / self.r_f64())
    }

    pub fn pdf(&self, snr: f64) -> Result<f64, ChannelError> {
        if !(snr > 0.0) {
            return Err(ChannelError::Domain(format!("EGG pdf needs snr > 0, got {snr}")));
        }
        let r = self.r_f64();
        let mut total = 0.0;
        if self.omega > 0.0 {
            let v = self.irradiance(snr);
            total += self.omega / (snr * self.lambda * r) * v * (-v / self.lambda).exp();
        }
        if self.omega < 1.0 {
            let u = self.gg_arg(snr);
            let ln = (self.c * (1.0 - self.omega)).ln() - (snr * r).ln() - ln_gamma(self.a) - u + self.a * u.ln();
            total += ln.exp();
        }
        Ok(total)
    }

    /// `ω exp(-(γ/μ_r)^{1/r} / λ) + (1 - ω) Γ(a, γ^{c/r} / (b^c μ_r^{c/r})) / Γ(a)`.
    pub fn ccdf(&self, snr: f64) -> Result<f64, ChannelError> {
        if snr < 0.0 || snr.is_nan() {
            return Err(ChannelError::Domain(format!("EGG ccdf needs snr >= 0, got {snr}")));
        }
        if snr == 0.0 {
            return Ok(1.0);
        }
        Ok(self.omega * self.exp_tail(snr) + (1.0 - self.omega) * self.gg_tail(snr)?)
    }

    pub fn cdf(&self, snr: f64) -> Result<f64, ChannelError> {
        Ok(1.0 - self.ccdf(snr)?)
    }

    /// Exponential-branch tail `exp(-(γ/μ_r)^{1/r} / λ)`.
    pub fn exp_tail(&self, snr: f64) -> f64 {
        (-self.irradiance(snr) / self.lambda).exp()
    }

    /// Generalized-Gamma-branch tail `Γ(a, ·)/Γ(a)`.
    pub fn gg_tail(&self, snr: f64) -> Result<f64, ChannelError> {
        Ok(regularized_upper_gamma(self.a, self.gg_arg(snr))?)
    }

    pub fn sampler(&self) -> EggSampler {
        EggSampler {
            link: *self,
            gamma: Gamma::new(self.a, 1.0).expect("validated shape"),
            inv_c: 1.0 / self.c,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.sampler().sample(rng)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EggSampler {
    link: EggLink,
    gamma: Gamma<f64>,
    inv_c: f64,
}

impl EggSampler {
    /// Draws the irradiance and which branch produced it (`true` = exponential).
    #[inline]
    pub fn sample_irradiance<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, bool) {
        let u: f64 = rng.random();
        if u < self.link.omega {
            let e: f64 = rng.random::<f64>();
            // Exp with mean λ by inversion; 1 - e lies in (0, 1]
            (-self.link.lambda * (1.0 - e).ln(), true)
        } else {
            let g: f64 = self.gamma.sample(rng);
            (self.link.b * g.powf(self.inv_c), false)
        }
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let (i, _) = self.sample_irradiance(rng);
        self.link.mu_r * i.powi(i32::from(self.link.r))
    }
}
