//! `SOP = 1 + K1 + K2` with both terms as bivariate H-functions.
//!
//! Writing every tail as a Mellin–Barnes integral and averaging over the
//! eavesdropper leaves a single Gamma coupling the two contour variables:
//!
//! ```text
//! K1 = -(1-ω) / (Γ(a)Γ(μ)Γ(μ_e)) · H[X, Y],   X = b^{-c} (Θ/(Λ_e μ_r))^{c/r},  Y = ΘΛ/Λ_e
//!      coupling Γ(μ_e - c s/(r α_e) - t/α_e)
//! K2 = -r ω U^{α_e μ_e} / (Γ(μ)Γ(μ_e)) · H[U, V],   U = λ^r Λ_e μ_r / Θ,  V = λ^r Λ μ_r
//!      coupling Γ(r α_e μ_e - r s - r t)
//! ```

use super::{KTerms, SecrecyError, SecrecyScenario, SopMethod, SopResult};
use crate::exec::Execution;
use crate::specfn::{fox_h_bivariate_detailed, ln_gamma, BivarFoxHParams, ContourSpec, FoxHParams};

/// Contour settings for the two Mellin–Barnes variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contours {
    pub x: ContourSpec,
    pub y: ContourSpec,
}

impl Default for Contours {
    fn default() -> Self {
        Self {
            x: ContourSpec::bivariate(),
            y: ContourSpec::bivariate(),
        }
    }
}

/// Tolerance of the oracle used to gate [`sop_exact`].
const GATE_ORACLE_TOL: f64 = 1e-10;
/// Absolute floor of the exact-vs-oracle agreement check.
const GATE_ABS: f64 = 1e-6;

fn rf_tail_group(alpha: f64, mu: f64) -> FoxHParams {
    FoxHParams {
        m: 2,
        n: 0,
        upper: vec![(1.0, 1.0)],
        lower: vec![(0.0, 1.0), (mu, 1.0 / alpha)],
    }
}

/// Parameters and arguments `(H, X, Y, prefactor)` of K1.
pub fn k1_bivariate(s: &SecrecyScenario) -> Result<(BivarFoxHParams, f64, f64, f64), SecrecyError> {
    let (m, e, u) = (&s.main_rf, &s.eavesdropper_rf, &s.uwoc);
    let r = u.r_f64();
    let theta = s.theta();
    let params = BivarFoxHParams::new(
        1,
        vec![(1.0 - e.mu, u.c / (r * e.alpha), 1.0 / e.alpha)],
        vec![],
        FoxHParams {
            m: 2,
            n: 0,
            upper: vec![(1.0, 1.0)],
            lower: vec![(0.0, 1.0), (u.a, 1.0)],
        },
        rf_tail_group(m.alpha, m.mu),
    )?;
    let x = (-u.c * u.b.ln() + u.c / r * (theta / (e.lambda() * u.mu_r)).ln()).exp();
    let y = theta * m.lambda() / e.lambda();
    let pref = -(1.0 - u.omega) * (-(ln_gamma(u.a) + ln_gamma(m.mu) + ln_gamma(e.mu))).exp();
    Ok((params, x, y, pref))
}

/// Parameters and arguments `(H, U, V, prefactor)` of K2.
pub fn k2_bivariate(s: &SecrecyScenario) -> Result<(BivarFoxHParams, f64, f64, f64), SecrecyError> {
    let (m, e, u) = (&s.main_rf, &s.eavesdropper_rf, &s.uwoc);
    let r = u.r_f64();
    let theta = s.theta();
    let p = e.alpha * e.mu;
    let params = BivarFoxHParams::new(
        1,
        vec![(1.0 - r * p, r, r)],
        vec![],
        FoxHParams {
            m: 1,
            n: 0,
            upper: vec![],
            lower: vec![(0.0, 1.0 / e.alpha)],
        },
        rf_tail_group(m.alpha, m.mu),
    )?;
    let ln_lr = r * u.lambda.ln();
    let ln_u = ln_lr + (e.lambda() * u.mu_r / theta).ln();
    let v = (ln_lr + (m.lambda() * u.mu_r).ln()).exp();
    let pref = -r * u.omega * (p * ln_u - ln_gamma(m.mu) - ln_gamma(e.mu)).exp();
    Ok((params, ln_u.exp(), v, pref))
}

/// Both terms from the bivariate engine, no clamping and no oracle check.
pub fn k_terms_exact(s: &SecrecyScenario, contours: &Contours, exec: Execution) -> Result<KTerms, SecrecyError> {
    s.validate()?;
    let eval = |(params, x, y, pref): (BivarFoxHParams, f64, f64, f64)| -> Result<(f64, f64), SecrecyError> {
        let h = fox_h_bivariate_detailed(&params, x, y, &contours.x, &contours.y, exec)?;
        Ok((pref * h.value, pref.abs() * h.error))
    };
    let (k1, k1_error) = if s.uwoc.omega < 1.0 {
        eval(k1_bivariate(s)?)?
    } else {
        (0.0, 0.0)
    };
    let (k2, k2_error) = if s.uwoc.omega > 0.0 {
        eval(k2_bivariate(s)?)?
    } else {
        (0.0, 0.0)
    };
    Ok(KTerms {
        k1,
        k1_error,
        k2,
        k2_error,
    })
}

/// Closed-form SOP before the oracle gate. The value may stray outside `[0, 1]`
/// by its estimated error.
pub fn sop_exact_unchecked(
    s: &SecrecyScenario,
    contours: &Contours,
    exec: Execution,
) -> Result<SopResult, SecrecyError> {
    let k = k_terms_exact(s, contours, exec)?;
    Ok(SopResult::new(k.sop(), SopMethod::Exact, k.error()))
}

/// Closed-form SOP, cross-checked against the quadrature oracle and then
/// clamped to `[0, 1]`.
pub fn sop_exact(s: &SecrecyScenario, contours: &Contours) -> Result<SopResult, SecrecyError> {
    sop_exact_with(s, contours, Execution::default())
}

pub fn sop_exact_with(s: &SecrecyScenario, contours: &Contours, exec: Execution) -> Result<SopResult, SecrecyError> {
    let raw = sop_exact_unchecked(s, contours, exec)?;
    let oracle = super::sop_oracle(s, GATE_ORACLE_TOL)?;
    let tol = GATE_ABS.max(3.0 * (raw.est_error + oracle.est_error));
    let gap = (raw.value - oracle.value).abs();
    if gap > tol {
        return Err(SecrecyError::OracleDisagreement {
            exact: raw.value,
            oracle: oracle.value,
            tolerance: tol,
        });
    }
    Ok(SopResult::new(
        raw.value.clamp(0.0, 1.0),
        SopMethod::Exact,
        raw.est_error,
    ))
}
