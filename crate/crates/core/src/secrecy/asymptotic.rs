//! High-SNR expansions built from univariate H-functions only.
//!
//! Main link (`γ̄₁ → ∞`): `F̄₁(x) ≈ 1 - (Λx)^{αμ}/Γ(μ+1)`, so each K term splits
//! into a `Λ`-free piece (the saturation floor) and a correction `∝ Λ^{αμ}`.
//!
//! Eavesdropper (`γ̄_e → ∞`): `f_e(γ) ≈ α_e κ_e (Λ_e γ)^{α_e μ_e - 1}` near the
//! origin, which is where the outage integrand lives.

use log::warn;

use super::{SecrecyError, SecrecyScenario, SopMethod, SopResult};
use crate::specfn::{fox_h_detailed, ln_gamma, ContourSpec, FoxHParams};

/// Pieces of the main-link expansion: `K ≈ floor + correction`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MainExpansion {
    pub k1_floor: f64,
    pub k1_correction: f64,
    pub k2_floor: f64,
    pub k2_correction: f64,
    pub error: f64,
}

impl MainExpansion {
    pub fn saturation(&self) -> f64 {
        1.0 + self.k1_floor + self.k2_floor
    }

    pub fn asymptotic(&self) -> f64 {
        self.saturation() + self.k1_correction + self.k2_correction
    }
}

fn h(params: FoxHParams, z: f64, contour: &ContourSpec) -> Result<(f64, f64), SecrecyError> {
    let e = fox_h_detailed(&params, z, contour)?;
    Ok((e.value, e.error))
}

/// Floor and `Λ^{αμ}` correction terms of K1 and K2.
pub fn main_expansion(s: &SecrecyScenario, contour: &ContourSpec) -> Result<MainExpansion, SecrecyError> {
    s.validate()?;
    let (m, e, u) = (&s.main_rf, &s.eavesdropper_rf, &s.uwoc);
    let r = u.r_f64();
    let theta = s.theta();
    let p = e.alpha * e.mu;
    let am = m.alpha * m.mu;
    let lg_e = ln_gamma(e.mu);
    let lg_mu1 = ln_gamma(m.mu + 1.0);
    let ln_y = (theta * m.lambda() / e.lambda()).ln();
    let mut error = 0.0;

    let (mut k1_floor, mut k1_correction) = (0.0, 0.0);
    if u.omega < 1.0 {
        // 1/X = b^c (Λ_e μ_r / Θ)^{c/r}
        let inv_x = (u.c * u.b.ln() + u.c / r * (e.lambda() * u.mu_r / theta).ln()).exp();
        let w = u.c / (r * e.alpha);
        let group = |b0: f64| FoxHParams {
            m: 1,
            n: 2,
            upper: vec![(1.0 - u.a, 1.0), (1.0, 1.0)],
            lower: vec![(b0, w), (0.0, 1.0)],
        };
        let (ha, ea) = h(group(e.mu), inv_x, contour)?;
        let (hb, eb) = h(group(am / e.alpha + e.mu), inv_x, contour)?;
        let base = (1.0 - u.omega) * (-(ln_gamma(u.a) + lg_e)).exp();
        let corr = base * (am * ln_y - lg_mu1).exp();
        k1_floor = -base * ha;
        k1_correction = corr * hb;
        error += base * ea + corr * eb;
    }

    let (mut k2_floor, mut k2_correction) = (0.0, 0.0);
    if u.omega > 0.0 {
        let ln_lr = r * u.lambda.ln();
        let ln_u = ln_lr + (e.lambda() * u.mu_r / theta).ln();
        let ln_v = ln_lr + (m.lambda() * u.mu_r).ln();
        let group = |b0: f64| FoxHParams {
            m: 1,
            n: 1,
            upper: vec![(1.0, 1.0 / e.alpha)],
            lower: vec![(b0, r)],
        };
        let inv_u = (-ln_u).exp();
        let (h1, e1) = h(group(r * p), inv_u, contour)?;
        let (h2, e2) = h(group(r * (am + p)), inv_u, contour)?;
        let base = r * u.omega * (p * ln_u - lg_e).exp();
        let corr = base * (am * ln_v - lg_mu1).exp();
        k2_floor = -base * h1;
        k2_correction = corr * h2;
        error += base * e1 + corr * e2;
    }

    Ok(MainExpansion {
        k1_floor,
        k1_correction,
        k2_floor,
        k2_correction,
        error,
    })
}

/// Two-term expansion for a strong source-relay link.
pub fn sop_asymptotic_main(s: &SecrecyScenario, contour: &ContourSpec) -> Result<SopResult, SecrecyError> {
    let ratio = s.theta() * s.main_rf.lambda() / s.eavesdropper_rf.lambda();
    if ratio >= 1.0 {
        warn!("main-link asymptote used outside its regime: ΘΛ/Λ_e = {ratio:.3e} >= 1");
    }
    let ex = main_expansion(s, contour)?;
    Ok(SopResult::new(
        ex.asymptotic(),
        SopMethod::AsymptoticMainHighSnr,
        ex.error,
    ))
}

/// SOP floor reached as `γ̄₁ → ∞`; it does not depend on the main link.
pub fn sop_saturation(s: &SecrecyScenario, contour: &ContourSpec) -> Result<SopResult, SecrecyError> {
    let ex = main_expansion(s, contour)?;
    Ok(SopResult::new(ex.saturation(), SopMethod::Saturation, ex.error))
}

/// Leading-order expansion for a strong eavesdropper.
pub fn sop_asymptotic_eve(s: &SecrecyScenario, contour: &ContourSpec) -> Result<SopResult, SecrecyError> {
    s.validate()?;
    let (m, e, u) = (&s.main_rf, &s.eavesdropper_rf, &s.uwoc);
    if e.mean_snr < 1.0 {
        warn!("eavesdropper asymptote used below 0 dB (γ̄_e = {:.3e})", e.mean_snr);
    }
    let r = u.r_f64();
    let theta = s.theta();
    let p = e.alpha * e.mu;
    let base_ln = r.ln() + e.alpha.ln() - ln_gamma(m.mu) - ln_gamma(e.mu);
    let mut value = 1.0;
    let mut error = 0.0;

    if u.omega < 1.0 {
        let q = r * p / u.c;
        let params = FoxHParams {
            m: 2,
            n: 2,
            upper: vec![(1.0, 1.0), (1.0 - m.mu, 1.0 / m.alpha), (1.0 + q, r / u.c)],
            lower: vec![(q, r / u.c), (u.a + q, r / u.c), (0.0, 1.0)],
        };
        let z = (-r * u.b.ln() - (m.lambda() * u.mu_r).ln()).exp();
        let (hv, he) = h(params, z, contour)?;
        let pref = (1.0 - u.omega)
            * (base_ln - u.c.ln() - ln_gamma(u.a) + p * (r * u.b.ln() + (e.lambda() * u.mu_r / theta).ln())).exp();
        value -= pref * hv;
        error += pref * he;
    }
    if u.omega > 0.0 {
        let params = FoxHParams {
            m: 1,
            n: 2,
            upper: vec![(1.0, 1.0), (1.0 - m.mu, 1.0 / m.alpha)],
            lower: vec![(r * p, r), (0.0, 1.0)],
        };
        let z = (-r * u.lambda.ln() - (m.lambda() * u.mu_r).ln()).exp();
        let (hv, he) = h(params, z, contour)?;
        let pref = u.omega * (base_ln + p * (r * u.lambda.ln() + (e.lambda() * u.mu_r / theta).ln())).exp();
        value -= pref * hv;
        error += pref * he;
    }
    Ok(SopResult::new(value, SopMethod::AsymptoticEveHighSnr, error))
}
