//! Bivariate Fox H-function as a nested double Mellin–Barnes integral.
//!
//! ```text
//! H[x; y] = (1/(2πi)^2) ∫_{L_s} ∫_{L_t} φ(s, t) χ_x(s) χ_y(t) x^{-s} y^{-t} ds dt
//! φ(s, t) = Π_{j<n1} Γ(1 - a_j - A_j s - A'_j t)
//!           / ( Π_{j>=n1} Γ(a_j + A_j s + A'_j t) Π_j Γ(1 - b_j - B_j s - B'_j t) )
//! ```
//!
//! `χ_x`, `χ_y` are the univariate kernels of the two inner groups. With the
//! substitution `s -> -s`, `t -> -t` this is the usual
//! `H^{0,n1:m2,n2;m3,n3}_{p1,q1:p2,q2;p3,q3}` with `x^s y^t`.

use std::f64::consts::PI;
use std::sync::Mutex;

use num_complex::Complex64;

use super::foxh::{ln_gamma_unchecked_recip_safe, minimize_in_gap, positive_breaks, symmetric_breaks};
use super::gamma::ln_gamma_unchecked;
use super::quad::{integrate_batch, QuadOptions};
use super::{ContourSpec, FoxHParams, SpecFnError};
use crate::exec::{map_slice, Execution};

/// Coupled Gamma factor `(coefficient, weight on s, weight on t)`.
pub type CoupledPair = (f64, f64, f64);

#[derive(Debug, Clone, PartialEq)]
pub struct BivarFoxHParams {
    /// Number of coupled numerator Gammas (`n1`).
    pub outer_n: usize,
    /// `(a_j, A_j, A'_j)`, length `p1`.
    pub outer_upper: Vec<CoupledPair>,
    /// `(b_j, B_j, B'_j)`, length `q1`.
    pub outer_lower: Vec<CoupledPair>,
    pub x_group: FoxHParams,
    pub y_group: FoxHParams,
}

impl BivarFoxHParams {
    pub fn new(
        outer_n: usize,
        outer_upper: Vec<CoupledPair>,
        outer_lower: Vec<CoupledPair>,
        x_group: FoxHParams,
        y_group: FoxHParams,
    ) -> Result<Self, SpecFnError> {
        let p = Self {
            outer_n,
            outer_upper,
            outer_lower,
            x_group,
            y_group,
        };
        p.validate()?;
        Ok(p)
    }

    /// Inner groups only: the kernel factorizes.
    pub fn decoupled(x_group: FoxHParams, y_group: FoxHParams) -> Self {
        Self {
            outer_n: 0,
            outer_upper: vec![],
            outer_lower: vec![],
            x_group,
            y_group,
        }
    }

    pub fn validate(&self) -> Result<(), SpecFnError> {
        self.x_group.validate()?;
        self.y_group.validate()?;
        if self.outer_n > self.outer_upper.len() {
            return Err(SpecFnError::InvalidParams(format!(
                "outer n1 = {} exceeds p1 = {}",
                self.outer_n,
                self.outer_upper.len()
            )));
        }
        for &(c, wx, wy) in self.outer_upper.iter().chain(&self.outer_lower) {
            if !c.is_finite() || !(wx > 0.0) || !(wy > 0.0) || !wx.is_finite() || !wy.is_finite() {
                return Err(SpecFnError::InvalidParams(format!(
                    "coupled triple ({c}, {wx}, {wy}) needs a finite coefficient and positive weights"
                )));
            }
        }
        Ok(())
    }

    /// `ln φ(s, t)`.
    #[inline]
    fn ln_coupled(&self, s: Complex64, t: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &(a, wx, wy)) in self.outer_upper.iter().enumerate() {
            if j < self.outer_n {
                acc += ln_gamma_unchecked(one - a - s * wx - t * wy);
            } else {
                acc -= ln_gamma_unchecked_recip_safe(s * wx + t * wy + a);
            }
        }
        for &(b, wx, wy) in &self.outer_lower {
            acc -= ln_gamma_unchecked_recip_safe(one - b - s * wx - t * wy);
        }
        acc
    }

    /// Slack `1 - a_j - A_j c_s - A'_j c_t` of each coupled numerator Gamma.
    fn coupled_slacks(&self, cs: f64, ct: f64) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.outer_upper[..self.outer_n]
            .iter()
            .map(move |&(a, wx, wy)| (1.0 - a - wx * cs - wy * ct, wx, wy))
    }

    fn is_feasible(&self, cs: f64, ct: f64) -> bool {
        cs > self.x_group.left_pole_bound()
            && cs < self.x_group.right_pole_bound()
            && ct > self.y_group.left_pole_bound()
            && ct < self.y_group.right_pole_bound()
            && self.coupled_slacks(cs, ct).all(|(slack, _, _)| slack > 0.0)
    }

    /// Upper limit on `c_s` imposed by the coupled Gammas at a given `c_t`.
    fn s_upper(&self, ct: f64) -> f64 {
        self.outer_upper[..self.outer_n]
            .iter()
            .map(|&(a, wx, wy)| (1.0 - a - wy * ct) / wx)
            .fold(self.x_group.right_pole_bound(), f64::min)
    }

    /// Upper limit on `c_t` over all admissible `c_s`.
    fn t_upper(&self) -> f64 {
        let s_lo = self.x_group.left_pole_bound();
        let mut hi = self.y_group.right_pole_bound();
        if s_lo.is_finite() {
            for &(a, wx, wy) in &self.outer_upper[..self.outer_n] {
                hi = hi.min((1.0 - a - wx * s_lo) / wy);
            }
        }
        hi
    }
}

/// Result of a bivariate evaluation with diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BivarEvaluation {
    pub value: f64,
    pub error: f64,
    pub contour: (f64, f64),
    pub half_heights: (f64, f64),
    pub evals: usize,
}

const MAX_HALF_HEIGHT: f64 = 2_000.0;

/// Bivariate H-function with the default (parallel) execution policy.
pub fn fox_h_bivariate(
    params: &BivarFoxHParams,
    x: f64,
    y: f64,
    contour_x: &ContourSpec,
    contour_y: &ContourSpec,
) -> Result<f64, SpecFnError> {
    fox_h_bivariate_detailed(params, x, y, contour_x, contour_y, Execution::default()).map(|e| e.value)
}

pub fn fox_h_bivariate_detailed(
    params: &BivarFoxHParams,
    x: f64,
    y: f64,
    contour_x: &ContourSpec,
    contour_y: &ContourSpec,
    exec: Execution,
) -> Result<BivarEvaluation, SpecFnError> {
    params.validate()?;
    contour_x.validate()?;
    contour_y.validate()?;
    for (name, v) in [("x", x), ("y", y)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(SpecFnError::Domain(format!(
                "bivariate H argument {name} must be positive, got {v}"
            )));
        }
    }
    let (ln_x, ln_y) = (x.ln(), y.ln());
    let (cs, ct) = place_contours(params, ln_x, ln_y, contour_x.real_part, contour_y.real_part)?;

    let (ds, dt) = pole_distances(params, cs, ct);
    let rel_tol = contour_x.rel_tol.max(contour_y.rel_tol);

    let integrand = |ts: f64, tt: f64| -> Complex64 {
        let s = Complex64::new(cs, ts);
        let t = Complex64::new(ct, tt);
        (params.ln_coupled(s, t) + params.x_group.ln_kernel(s) + params.y_group.ln_kernel(t) - s * ln_x - t * ln_y)
            .exp()
    };
    let peak = integrand(0.0, 0.0).norm();
    if !(peak.is_finite()) {
        return Err(SpecFnError::ContourInfeasible(format!(
            "integrand not finite at contour point ({cs}, {ct})"
        )));
    }

    let (tx, ty) = truncation_heights(&integrand, peak, rel_tol, contour_x.half_height, contour_y.half_height)?;

    let inner_breaks = symmetric_breaks(ds, tx);
    let inner_state = Mutex::new(InnerStats::default());
    let inner = |tt: f64, abs_tol: f64| {
        let t = Complex64::new(ct, tt);
        let y_part = params.y_group.ln_kernel(t) - t * ln_y;
        let f = |ts: f64| {
            let s = Complex64::new(cs, ts);
            (params.ln_coupled(s, t) + params.x_group.ln_kernel(s) + y_part - s * ln_x).exp()
        };
        let res = integrate_batch(
            |xs: &[f64]| xs.iter().map(|&v| f(v)).collect(),
            &inner_breaks,
            QuadOptions::new(abs_tol, rel_tol / 10.0, contour_x.max_nodes),
        );
        let mut st = inner_state.lock().expect("inner stats lock");
        st.max_error = st.max_error.max(res.error);
        st.evals += res.evals;
        st.all_converged &= res.converged;
        res.value
    };

    // Scale of the outer integrand sets the absolute floors.
    let scale = inner(0.0, 1e-3 * rel_tol * peak).norm().max(f64::MIN_POSITIVE);
    let inner_abs = 1e-3 * rel_tol * scale;

    let outer_breaks = positive_breaks(dt, ty);
    let outer = integrate_batch(
        |taus: &[f64]| map_slice(exec, taus, |&tt| inner(tt, inner_abs)),
        &outer_breaks,
        QuadOptions::new(1e-3 * rel_tol * scale, rel_tol, contour_y.max_nodes),
    );

    let stats = inner_state.into_inner().expect("inner stats lock");
    // (1/(2πi))^2 ∫∫ ds dt = (1/4π^2) ∫∫ dτ_s dτ_t, and conjugate symmetry folds τ_t < 0.
    let norm = 1.0 / (2.0 * PI * PI);
    let value = outer.value.re * norm;
    let error = (outer.error + stats.max_error * ty) * norm;
    let eval = BivarEvaluation {
        value,
        error,
        contour: (cs, ct),
        half_heights: (tx, ty),
        evals: stats.evals,
    };
    if !outer.converged || !stats.all_converged {
        return Err(SpecFnError::NotConverged { estimate: value, error });
    }
    Ok(eval)
}

struct InnerStats {
    max_error: f64,
    evals: usize,
    all_converged: bool,
}

impl Default for InnerStats {
    fn default() -> Self {
        Self {
            max_error: 0.0,
            evals: 0,
            all_converged: true,
        }
    }
}

/// Distance from the contour point to the nearest pole in each variable, capped at 1.
fn pole_distances(p: &BivarFoxHParams, cs: f64, ct: f64) -> (f64, f64) {
    let mut ds = (cs - p.x_group.left_pole_bound()).min(p.x_group.right_pole_bound() - cs);
    let mut dt = (ct - p.y_group.left_pole_bound()).min(p.y_group.right_pole_bound() - ct);
    for (slack, wx, wy) in p.coupled_slacks(cs, ct) {
        ds = ds.min(slack / wx);
        dt = dt.min(slack / wy);
    }
    (ds.min(1.0), dt.min(1.0))
}

/// Grow the truncation rectangle until the integrand on its boundary is
/// negligible against the peak. The coupled Gammas do not decay along the
/// direction that keeps `A τ_s + A' τ_t` fixed, so the whole boundary is
/// sampled rather than just the axes.
fn truncation_heights<F: Fn(f64, f64) -> Complex64>(
    f: &F,
    peak: f64,
    rel_tol: f64,
    mut tx: f64,
    mut ty: f64,
) -> Result<(f64, f64), SpecFnError> {
    const SAMPLES: usize = 128;
    let limit = 1e-3 * rel_tol * peak;
    loop {
        let mut side_x = 0.0f64;
        let mut side_y = 0.0f64;
        for k in 0..=SAMPLES {
            let u = k as f64 / SAMPLES as f64;
            let tt = u * ty;
            side_x = side_x.max(f(tx, tt).norm()).max(f(-tx, tt).norm());
            let ts = (2.0 * u - 1.0) * tx;
            side_y = side_y.max(f(ts, ty).norm());
        }
        let ok_x = side_x <= limit;
        let ok_y = side_y <= limit;
        if ok_x && ok_y {
            return Ok((tx, ty));
        }
        if !ok_x {
            tx *= 2.0;
        }
        if !ok_y {
            ty *= 2.0;
        }
        if tx > MAX_HALF_HEIGHT || ty > MAX_HALF_HEIGHT {
            return Err(SpecFnError::NotConverged {
                estimate: f64::NAN,
                error: f64::INFINITY,
            });
        }
    }
}

/// Choose `(Re s, Re t)`: explicit overrides are checked for feasibility, the
/// rest minimize the integrand magnitude at the real contour point.
fn place_contours(
    p: &BivarFoxHParams,
    ln_x: f64,
    ln_y: f64,
    req_s: Option<f64>,
    req_t: Option<f64>,
) -> Result<(f64, f64), SpecFnError> {
    let x_lo = p.x_group.left_pole_bound();
    let y_lo = p.y_group.left_pole_bound();
    if !(x_lo < p.x_group.right_pole_bound()) || !(y_lo < p.y_group.right_pole_bound()) {
        return Err(SpecFnError::ContourInfeasible("an inner group has no pole gap".into()));
    }
    let objective = |cs: f64, ct: f64| -> f64 {
        if !p.is_feasible(cs, ct) {
            return f64::INFINITY;
        }
        let s = Complex64::new(cs, 0.0);
        let t = Complex64::new(ct, 0.0);
        let v = (p.ln_coupled(s, t) + p.x_group.ln_kernel(s) + p.y_group.ln_kernel(t)).re - cs * ln_x - ct * ln_y;
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let best_s = |ct: f64| -> Option<f64> {
        let hi = p.s_upper(ct);
        if !(x_lo < hi) {
            return None;
        }
        Some(minimize_in_gap(|cs| objective(cs, ct), x_lo, hi))
    };

    let (cs, ct) = match (req_s, req_t) {
        (Some(cs), Some(ct)) => (cs, ct),
        (Some(cs), None) => {
            let mut hi = p.y_group.right_pole_bound();
            for &(a, wx, wy) in &p.outer_upper[..p.outer_n] {
                hi = hi.min((1.0 - a - wx * cs) / wy);
            }
            if !(y_lo < hi) {
                return Err(SpecFnError::ContourInfeasible(format!(
                    "no admissible Re t for Re s = {cs}"
                )));
            }
            (cs, minimize_in_gap(|ct| objective(cs, ct), y_lo, hi))
        }
        (None, Some(ct)) => {
            let cs = best_s(ct)
                .ok_or_else(|| SpecFnError::ContourInfeasible(format!("no admissible Re s for Re t = {ct}")))?;
            (cs, ct)
        }
        (None, None) => {
            let t_hi = p.t_upper();
            if !(y_lo < t_hi) {
                return Err(SpecFnError::ContourInfeasible(
                    "coupled Gammas leave no room between the pole families".into(),
                ));
            }
            let profile = |ct: f64| best_s(ct).map_or(f64::INFINITY, |cs| objective(cs, ct));
            let ct = minimize_in_gap(profile, y_lo, t_hi);
            let cs = best_s(ct).ok_or_else(|| SpecFnError::ContourInfeasible("empty s-gap".into()))?;
            (cs, ct)
        }
    };
    if !p.is_feasible(cs, ct) {
        return Err(SpecFnError::ContourInfeasible(format!(
            "contour point ({cs}, {ct}) does not separate the pole families"
        )));
    }
    Ok((cs, ct))
}
