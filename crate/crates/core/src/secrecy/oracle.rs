//! Real-axis quadrature of the SOP lower bound, independent of any H-function.
//!
//! `SOP = ∫ F_eq(Θγ) f_e(γ) dγ`. Substituting `(Λ_e γ)^{α_e} = e^w` turns the
//! eavesdropper density into `exp(μ_e w - e^w) / Γ(μ_e)`, which is smooth,
//! decays doubly-exponentially on the right and exponentially on the left, so a
//! finite window with a bounded tail mass suffices.

use super::{KTerms, SecrecyError, SecrecyScenario, SopMethod, SopResult};
use crate::channels::AlphaMuLink;
use crate::specfn::quad::{integrate, QuadOptions, QuadResult};
use crate::specfn::{fox_h, ln_gamma, ContourSpec, FoxHParams};

const ORACLE_MAX_EVALS: usize = 400_000;

/// `F_eq(γ) = 1 - F̄₁(γ) F̄₂(γ)` for the DF relay.
pub fn end_to_end_cdf(s: &SecrecyScenario, snr: f64) -> Result<f64, SecrecyError> {
    Ok(1.0 - s.main_rf.ccdf(snr)? * s.uwoc.ccdf(snr)?)
}

/// [`end_to_end_cdf`] with every tail written as a univariate H-function:
/// `F̄₁ = (κ/Λ) H^{2,0}_{1,2}[Λγ | (1,1); (0,1),(μ,1/α)]`,
/// `e^{-x} = H^{1,0}_{0,1}[x | (0,1)]` and
/// `Γ(a,x) = H^{2,0}_{1,2}[x | (1,1); (0,1),(a,1)]`.
pub fn end_to_end_cdf_hform(s: &SecrecyScenario, snr: f64, contour: &ContourSpec) -> Result<f64, SecrecyError> {
    if snr < 0.0 || snr.is_nan() {
        return Err(SecrecyError::InvalidInput(format!("snr must be >= 0, got {snr}")));
    }
    if snr == 0.0 {
        return Ok(0.0);
    }
    let m = &s.main_rf;
    let u = &s.uwoc;
    let r = u.r_f64();
    let f1 = m.kappa() / m.lambda() * fox_h(&m.tail_h_params(), m.lambda() * snr, contour)?;
    let exp_h = FoxHParams {
        m: 1,
        n: 0,
        upper: vec![],
        lower: vec![(0.0, 1.0)],
    };
    let gg_h = FoxHParams {
        m: 2,
        n: 0,
        upper: vec![(1.0, 1.0)],
        lower: vec![(0.0, 1.0), (u.a, 1.0)],
    };
    let mut f2 = 0.0;
    if u.omega > 0.0 {
        f2 += u.omega * fox_h(&exp_h, (snr / u.mu_r).powf(1.0 / r) / u.lambda, contour)?;
    }
    if u.omega < 1.0 {
        let arg = (snr / (u.b.powf(r) * u.mu_r)).powf(u.c / r);
        f2 += (1.0 - u.omega) / ln_gamma(u.a).exp() * fox_h(&gg_h, arg, contour)?;
    }
    Ok(1.0 - f1 * f2)
}

/// Integration window in the `w` variable and the probability mass left
/// outside it.
fn window(eve: &AlphaMuLink, tail: f64) -> (f64, f64) {
    let me = eve.mu;
    let lg = ln_gamma(me);
    // left tail mass ∫_{-∞}^{w} e^{μ_e v}/Γ(μ_e) dv = e^{μ_e w} / (μ_e Γ(μ_e))
    let w_lo = ((tail * me).ln() + lg) / me;
    let log_density = |w: f64| me * w - w.exp() - lg;
    let mut w_hi = me.ln().max(0.0) + 1.0;
    // beyond this point the density falls faster than e^{-e^w / 2}
    while log_density(w_hi) > tail.ln() - 10.0 {
        w_hi += 0.25;
    }
    (w_lo.min(w_hi - 1.0), w_hi)
}

fn breakpoints(s: &SecrecyScenario, w_lo: f64, w_hi: f64) -> Vec<f64> {
    let eve = &s.eavesdropper_rf;
    let (lam_e, ae) = (eve.lambda(), eve.alpha);
    let theta = s.theta();
    let u = &s.uwoc;
    let r = u.r_f64();
    let to_w = |snr: f64| ae * (lam_e * snr / theta).ln();
    let mut pts = vec![w_lo, w_hi, eve.mu.ln()];
    pts.push(to_w(1.0 / s.main_rf.lambda()));
    pts.push(to_w(u.b.powf(r) * u.mu_r));
    pts.push(to_w(u.lambda.powf(r) * u.mu_r));
    let mut inside: Vec<f64> = pts
        .into_iter()
        .filter(|w| w.is_finite() && *w >= w_lo && *w <= w_hi)
        .collect();
    inside.sort_by(f64::total_cmp);
    inside.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    inside
}

/// `K1` and `K2` as the defining one-dimensional integrals.
pub fn k_terms_oracle(s: &SecrecyScenario, quad_tol: f64) -> Result<KTerms, SecrecyError> {
    s.validate()?;
    if !(quad_tol > 0.0 && quad_tol <= 1e-3) {
        return Err(SecrecyError::InvalidInput(format!(
            "quad_tol must lie in (0, 1e-3], got {quad_tol}"
        )));
    }
    let eve = &s.eavesdropper_rf;
    let (lam_e, ae, me) = (eve.lambda(), eve.alpha, eve.mu);
    let lg = ln_gamma(me);
    let theta = s.theta();
    let tail = quad_tol * 1e-3;
    let (w_lo, w_hi) = window(eve, tail);
    let breaks = breakpoints(s, w_lo, w_hi);
    let u = s.uwoc;
    let main = s.main_rf;

    // x = Θγ(w)
    let arg = |w: f64| theta * (w / ae).exp() / lam_e;
    let density = |w: f64| (me * w - w.exp() - lg).exp();
    let opts = QuadOptions::new(quad_tol * 0.1, 1e-13, ORACLE_MAX_EVALS);

    // tails only fail on negative or NaN input, which a finite w never produces
    let k1 = if u.omega < 1.0 {
        integrate(
            |w: f64| {
                let x = arg(w);
                let f1 = main.ccdf(x).unwrap_or(f64::NAN);
                let g = u.gg_tail(x).unwrap_or(f64::NAN);
                -(1.0 - u.omega) * f1 * g * density(w)
            },
            &breaks,
            opts,
        )
    } else {
        zero_result()
    };
    let k2 = if u.omega > 0.0 {
        integrate(
            |w: f64| {
                let x = arg(w);
                -u.omega * main.ccdf(x).unwrap_or(f64::NAN) * u.exp_tail(x) * density(w)
            },
            &breaks,
            opts,
        )
    } else {
        zero_result()
    };
    if !(k1.value.is_finite() && k2.value.is_finite()) {
        return Err(SecrecyError::InvalidInput(
            "oracle integrand produced a non-finite value".into(),
        ));
    }
    for r in [&k1, &k2] {
        if !r.converged {
            return Err(SecrecyError::NotConverged {
                estimate: 1.0 + k1.value + k2.value,
                error: r.error,
            });
        }
    }
    Ok(KTerms {
        k1: k1.value,
        k1_error: k1.error + tail,
        k2: k2.value,
        k2_error: k2.error + tail,
    })
}

fn zero_result() -> QuadResult<f64> {
    QuadResult {
        value: 0.0,
        error: 0.0,
        evals: 0,
        converged: true,
    }
}

/// Ground-truth SOP lower bound by adaptive quadrature.
pub fn sop_oracle(s: &SecrecyScenario, quad_tol: f64) -> Result<SopResult, SecrecyError> {
    let k = k_terms_oracle(s, quad_tol)?;
    Ok(SopResult::new(k.sop(), SopMethod::Oracle, k.error()))
}
