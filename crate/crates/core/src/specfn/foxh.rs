//! Univariate Fox H-function by direct quadrature of its Mellin–Barnes integral.
//!
//! `H^{m,n}_{p,q}[z] = (1/2πi) ∫_L χ(s) z^{-s} ds` with
//!
//! ```text
//! χ(s) = Π_{j<m} Γ(b_j + B_j s) Π_{j<n} Γ(1 - a_j - A_j s)
//!        / ( Π_{j>=m} Γ(1 - b_j - B_j s) Π_{j>=n} Γ(a_j + A_j s) )
//! ```
//!
//! and `L` the vertical line `Re s = c` separating the two pole families.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::ln_gamma_unchecked;
use super::quad::{integrate, QuadOptions};
use super::SpecFnError;

/// Orders and coefficient groups of `H^{m,n}_{p,q}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FoxHParams {
    pub m: usize,
    pub n: usize,
    /// `(a_j, A_j)`, length `p`.
    pub upper: Vec<(f64, f64)>,
    /// `(b_j, B_j)`, length `q`.
    pub lower: Vec<(f64, f64)>,
}

impl FoxHParams {
    pub fn new(m: usize, n: usize, upper: Vec<(f64, f64)>, lower: Vec<(f64, f64)>) -> Result<Self, SpecFnError> {
        let params = Self { m, n, upper, lower };
        params.validate()?;
        Ok(params)
    }

    pub fn p(&self) -> usize {
        self.upper.len()
    }

    pub fn q(&self) -> usize {
        self.lower.len()
    }

    pub fn validate(&self) -> Result<(), SpecFnError> {
        if self.m > self.q() || self.n > self.p() {
            return Err(SpecFnError::InvalidParams(format!(
                "orders out of range: m = {}, n = {}, p = {}, q = {}",
                self.m,
                self.n,
                self.p(),
                self.q()
            )));
        }
        for &(coef, weight) in self.upper.iter().chain(&self.lower) {
            if !coef.is_finite() || !(weight > 0.0) || !weight.is_finite() {
                return Err(SpecFnError::InvalidParams(format!(
                    "coefficient pair ({coef}, {weight}) needs a finite coefficient and a positive weight"
                )));
            }
        }
        Ok(())
    }

    /// Rightmost pole of `Π_{j<m} Γ(b_j + B_j s)`, or `-∞` when `m = 0`.
    pub fn left_pole_bound(&self) -> f64 {
        self.lower[..self.m]
            .iter()
            .map(|&(b, bw)| -b / bw)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Leftmost pole of `Π_{j<n} Γ(1 - a_j - A_j s)`, or `+∞` when `n = 0`.
    pub fn right_pole_bound(&self) -> f64 {
        self.upper[..self.n]
            .iter()
            .map(|&(a, aw)| (1.0 - a) / aw)
            .fold(f64::INFINITY, f64::min)
    }

    /// `ln χ(s)` in complex log-space.
    #[inline]
    pub fn ln_kernel(&self, s: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &(b, bw)) in self.lower.iter().enumerate() {
            if j < self.m {
                acc += ln_gamma_unchecked(s * bw + b);
            } else {
                acc -= ln_gamma_unchecked_recip_safe(one - b - s * bw);
            }
        }
        for (j, &(a, aw)) in self.upper.iter().enumerate() {
            if j < self.n {
                acc += ln_gamma_unchecked(one - a - s * aw);
            } else {
                acc -= ln_gamma_unchecked_recip_safe(s * aw + a);
            }
        }
        acc
    }

    /// Mellin–Barnes integrand `χ(s) z^{-s}` given `ln z`.
    #[inline]
    pub fn integrand(&self, s: Complex64, ln_z: f64) -> Complex64 {
        (self.ln_kernel(s) - s * ln_z).exp()
    }
}

/// `ln Γ(w)` for a Gamma that sits in a denominator: at a pole `1/Γ` vanishes,
/// which is encoded as `+∞` so the subtraction sends the integrand to zero.
#[inline]
pub(crate) fn ln_gamma_unchecked_recip_safe(w: Complex64) -> Complex64 {
    if w.im == 0.0 && w.re <= 0.0 && w.re == w.re.round() {
        return Complex64::new(f64::INFINITY, 0.0);
    }
    ln_gamma_unchecked(w)
}

/// Vertical contour and accuracy controls for one Mellin–Barnes variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    /// `Re s` of the contour; `None` places it automatically.
    pub real_part: Option<f64>,
    /// Initial truncation `T` of `|Im s|`; doubled until the tail is negligible.
    pub half_height: f64,
    pub rel_tol: f64,
    /// Integrand-evaluation budget.
    pub max_nodes: usize,
}

impl ContourSpec {
    pub fn univariate() -> Self {
        Self {
            real_part: None,
            half_height: 40.0,
            rel_tol: 1e-10,
            max_nodes: 400_000,
        }
    }

    pub fn bivariate() -> Self {
        Self {
            real_part: None,
            half_height: 40.0,
            rel_tol: 1e-8,
            max_nodes: 200_000,
        }
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_real_part(mut self, c: f64) -> Self {
        self.real_part = Some(c);
        self
    }

    pub fn with_half_height(mut self, t: f64) -> Self {
        self.half_height = t;
        self
    }

    pub fn with_max_nodes(mut self, n: usize) -> Self {
        self.max_nodes = n;
        self
    }

    pub fn validate(&self) -> Result<(), SpecFnError> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(SpecFnError::InvalidParams(format!(
                "rel_tol must lie in (0, 1), got {}",
                self.rel_tol
            )));
        }
        if !(self.half_height > 0.0 && self.half_height.is_finite()) {
            return Err(SpecFnError::InvalidParams(format!(
                "half_height must be finite and positive, got {}",
                self.half_height
            )));
        }
        if self.max_nodes == 0 {
            return Err(SpecFnError::InvalidParams("max_nodes must be positive".into()));
        }
        Ok(())
    }
}

impl Default for ContourSpec {
    fn default() -> Self {
        Self::univariate()
    }
}

/// Full output of a univariate evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HEvaluation {
    pub value: f64,
    /// Estimated absolute error (quadrature plus truncated tails).
    pub error: f64,
    /// Imaginary part of the computed line integral; zero in exact arithmetic.
    pub imag_residue: f64,
    pub contour_re: f64,
    pub half_height: f64,
    pub evals: usize,
}

/// Largest truncation height tried before giving up.
const MAX_HALF_HEIGHT: f64 = 5_000.0;

/// `H^{m,n}_{p,q}[z]` for `z > 0`.
pub fn fox_h(params: &FoxHParams, z: f64, contour: &ContourSpec) -> Result<f64, SpecFnError> {
    fox_h_detailed(params, z, contour).map(|e| e.value)
}

/// [`fox_h`] with error estimate, imaginary residue and contour diagnostics.
pub fn fox_h_detailed(params: &FoxHParams, z: f64, contour: &ContourSpec) -> Result<HEvaluation, SpecFnError> {
    params.validate()?;
    contour.validate()?;
    if !(z > 0.0) || !z.is_finite() {
        return Err(SpecFnError::Domain(format!(
            "H-function argument must be positive and finite, got {z}"
        )));
    }
    let ln_z = z.ln();
    let c = place_contour(params, ln_z, contour.real_part)?;
    let pole_dist = {
        let l = c - params.left_pole_bound();
        let r = params.right_pole_bound() - c;
        l.min(r).min(1.0)
    };

    let f = |tau: f64| params.integrand(Complex64::new(c, tau), ln_z);
    let peak = f(0.0).norm();

    let mut half_height = contour.half_height;
    let mut evals_total = 0usize;
    loop {
        let breaks = symmetric_breaks(pole_dist, half_height);
        let budget = contour.max_nodes.saturating_sub(evals_total);
        let opts = QuadOptions::new(contour.rel_tol * 1e-3 * peak, contour.rel_tol / 10.0, budget);
        let res = integrate(f, &breaks, opts);
        evals_total += res.evals;
        let value = res.value * (1.0 / (2.0 * PI));
        let quad_err = res.error / (2.0 * PI);
        let tail = (f(half_height).norm() + f(-half_height).norm()) * half_height / (2.0 * PI);
        let tail_ok = tail <= contour.rel_tol / 10.0 * value.norm().max(1e-3 * peak / (2.0 * PI));
        let eval = HEvaluation {
            value: value.re,
            error: quad_err + tail,
            imag_residue: value.im,
            contour_re: c,
            half_height,
            evals: evals_total,
        };
        if !res.converged {
            return Err(SpecFnError::NotConverged {
                estimate: eval.value,
                error: eval.error,
            });
        }
        if tail_ok {
            return Ok(eval);
        }
        if half_height * 2.0 > MAX_HALF_HEIGHT {
            return Err(SpecFnError::NotConverged {
                estimate: eval.value,
                error: eval.error,
            });
        }
        half_height *= 2.0;
    }
}

/// Breakpoints `0, ±d, ±4d, ±16d, ..., ±T`, clustering panels where the
/// integrand varies on the scale of the pole distance.
pub(crate) fn symmetric_breaks(d: f64, t: f64) -> Vec<f64> {
    let positive = positive_breaks(d, t);
    let mut out: Vec<f64> = positive.iter().rev().map(|x| -x).collect();
    out.extend(positive.iter().skip(1));
    out
}

/// `0, d, 4d, ..., T`.
pub(crate) fn positive_breaks(d: f64, t: f64) -> Vec<f64> {
    let mut out = vec![0.0];
    let mut x = d.max(1e-6);
    while x < t {
        out.push(x);
        x *= 4.0;
    }
    out.push(t);
    out
}

/// Pick `Re s`: a user override (checked), else the minimizer of the integrand
/// magnitude on the real axis inside the pole gap.
fn place_contour(params: &FoxHParams, ln_z: f64, requested: Option<f64>) -> Result<f64, SpecFnError> {
    let lo = params.left_pole_bound();
    let hi = params.right_pole_bound();
    if !(lo < hi) {
        return Err(SpecFnError::ContourInfeasible(format!(
            "left poles reach {lo}, right poles start at {hi}: no separating line"
        )));
    }
    if let Some(c) = requested {
        if !(c > lo && c < hi) {
            return Err(SpecFnError::ContourInfeasible(format!(
                "requested Re s = {c} outside the pole gap ({lo}, {hi})"
            )));
        }
        return Ok(c);
    }
    let g = |c: f64| {
        let v = (params.ln_kernel(Complex64::new(c, 0.0)) - c * ln_z).re;
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    Ok(minimize_in_gap(g, lo, hi))
}

/// Minimize a unimodal-ish function on the open interval `(lo, hi)`; either
/// end may be infinite. Stays at least 2% of a finite gap away from its ends.
pub(crate) fn minimize_in_gap<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> f64 {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => {
            let m = 0.02 * (hi - lo);
            golden(&f, lo + m, hi - m)
        }
        (true, false) => expand(&f, lo, 1.0),
        (false, true) => expand(&f, hi, -1.0),
        (false, false) => {
            let f0 = f(0.0);
            if f(1.0) < f0 {
                expand(&f, 0.0, 1.0)
            } else if f(-1.0) < f0 {
                expand(&f, 0.0, -1.0)
            } else {
                golden(&f, -1.0, 1.0)
            }
        }
    }
}

/// Walk away from the finite bound `edge` in direction `dir` with doubling
/// steps until `f` stops decreasing, then refine by golden section.
fn expand<F: Fn(f64) -> f64>(f: &F, edge: f64, dir: f64) -> f64 {
    let mut near = edge + dir * 0.02;
    let mut x = edge + dir * 0.5;
    let mut fx = f(x);
    let mut step = 0.5;
    loop {
        let y = x + dir * step;
        let fy = f(y);
        if !(fy < fx) || step > 1e7 {
            return golden(f, near.min(y), near.max(y));
        }
        near = x;
        x = y;
        fx = fy;
        step *= 2.0;
    }
}

fn golden<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..100 {
        if (b - a).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn exponential_kernel() {
        let p = FoxHParams::new(1, 0, vec![], vec![(0.0, 1.0)]).unwrap();
        let v = fox_h(&p, 1.0, &ContourSpec::default()).unwrap();
        assert!(rel(v, (-1f64).exp()) < 1e-10);
    }

    #[test]
    fn incomplete_gamma_kernel() {
        // H^{2,0}_{1,2}[x | (1,1); (0,1),(1,1)] = Γ(1, x) = e^{-x}
        let p = FoxHParams::new(2, 0, vec![(1.0, 1.0)], vec![(0.0, 1.0), (1.0, 1.0)]).unwrap();
        let v = fox_h(&p, 1.0, &ContourSpec::default()).unwrap();
        assert!(rel(v, (-1f64).exp()) < 1e-10);
    }

    #[test]
    fn infeasible_contour_is_rejected() {
        // Γ(1 + s) Γ(-s): left pole at -1, right pole at 0 -> feasible
        let ok = FoxHParams::new(1, 1, vec![(1.0, 1.0)], vec![(1.0, 1.0)]).unwrap();
        assert!(fox_h(&ok, 0.5, &ContourSpec::default()).is_ok());
        // Γ(s - 1) Γ(-s): left pole at 1 beyond right pole at 0
        let bad = FoxHParams::new(1, 1, vec![(1.0, 1.0)], vec![(-1.0, 1.0)]).unwrap();
        assert!(matches!(
            fox_h(&bad, 0.5, &ContourSpec::default()),
            Err(SpecFnError::ContourInfeasible(_))
        ));
        let spec = ContourSpec::default().with_real_part(2.0);
        assert!(matches!(fox_h(&ok, 0.5, &spec), Err(SpecFnError::ContourInfeasible(_))));
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = FoxHParams::new(1, 0, vec![], vec![(0.0, 1.0)]).unwrap();
        assert!(fox_h(&p, 0.0, &ContourSpec::default()).is_err());
        assert!(fox_h(&p, -1.0, &ContourSpec::default()).is_err());
        assert!(FoxHParams::new(2, 0, vec![], vec![(0.0, 1.0)]).is_err());
        assert!(FoxHParams::new(1, 0, vec![], vec![(0.0, -1.0)]).is_err());
        assert!(fox_h(&p, 1.0, &ContourSpec::default().with_rel_tol(0.0)).is_err());
    }

    #[test]
    fn tiny_budget_reports_not_converged() {
        let p = FoxHParams::new(2, 0, vec![(1.0, 1.0)], vec![(0.0, 1.0), (0.3, 0.7)]).unwrap();
        let spec = ContourSpec::default().with_max_nodes(50);
        assert!(matches!(fox_h(&p, 2.0, &spec), Err(SpecFnError::NotConverged { .. })));
    }

    #[test]
    fn breaks_are_sorted_and_symmetric() {
        let b = symmetric_breaks(0.1, 40.0);
        assert!(b.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(b.first().copied(), Some(-40.0));
        assert_eq!(b.last().copied(), Some(40.0));
        assert!(b.contains(&0.0));
    }
}
