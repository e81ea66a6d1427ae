//! Complex log-Gamma and the upper incomplete Gamma function.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::SpecFnError;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

/// Distance from a non-positive integer below which an argument is treated as a pole.
const POLE_TOL: f64 = 1e-12;

/// Stirling-series coefficients `B_{2k} / (2k (2k - 1))`, k = 1..9.
const STIRLING: [f64; 9] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
];

/// `ln Γ(z)` for complex `z`.
///
/// For `Re z >= 1/2` this is the log-Gamma branch continuous from the positive
/// real axis (the one returned by `scipy.special.loggamma`). The left half-plane
/// goes through the reflection formula, so its imaginary part is only defined
/// modulo `2π`; `exp` of the result is always `Γ(z)`.
pub fn ln_gamma_complex(z: Complex64) -> Result<Complex64, SpecFnError> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(SpecFnError::Domain(format!("ln_gamma of non-finite argument {z}")));
    }
    if z.re <= POLE_TOL && z.im.abs() <= POLE_TOL && (z.re - z.re.round()).abs() <= POLE_TOL {
        return Err(SpecFnError::Pole { re: z.re, im: z.im });
    }
    Ok(ln_gamma_unchecked(z))
}

/// `ln Γ(z)` without the pole check. Callers guarantee `z` is not a pole.
#[inline]
pub(crate) fn ln_gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z) Γ(1 - z) = π / sin(πz)
        let one = Complex64::new(1.0, 0.0);
        return Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma_right(one - z);
    }
    ln_gamma_right(z)
}

#[inline]
fn ln_gamma_right(mut z: Complex64) -> Complex64 {
    let mut shift = Complex64::new(0.0, 0.0);
    while z.norm_sqr() < 100.0 {
        shift += z.ln();
        z += 1.0;
    }
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + series - shift
}

/// `ln sin(πz)` without overflow for large `|Im z|`.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        return ln_sin_pi(z.conj()).conj();
    }
    // sin(πz) = (i/2) e^{-iπz} (1 - e^{2iπz}),  |e^{2iπz}| <= 1 for Im z >= 0
    let i = Complex64::new(0.0, 1.0);
    let q = (i * 2.0 * PI * z).exp();
    Complex64::new((0.5f64).ln(), PI / 2.0) - i * PI * z + (Complex64::new(1.0, 0.0) - q).ln()
}

/// `ln Γ(x)` for real `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    ln_gamma_unchecked(Complex64::new(x, 0.0)).re
}

/// `Γ(x)` for real `x > 0`.
pub fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}

const MAX_ITER: usize = 10_000;
const EPS: f64 = 1e-16;

/// Regularized upper incomplete Gamma `Q(a, x) = Γ(a, x) / Γ(a)`.
pub fn regularized_upper_gamma(a: f64, x: f64) -> Result<f64, SpecFnError> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(SpecFnError::Domain(format!(
            "incomplete gamma requires a > 0, got a = {a}"
        )));
    }
    if !(x >= 0.0) {
        return Err(SpecFnError::Domain(format!(
            "incomplete gamma requires x >= 0, got x = {x}"
        )));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    if x < a + 1.0 {
        Ok((1.0 - lower_series(a, x)).max(0.0))
    } else {
        Ok(upper_continued_fraction(a, x))
    }
}

/// Upper incomplete Gamma `Γ(a, x) = ∫_x^∞ t^{a-1} e^{-t} dt`.
pub fn upper_incomplete_gamma(a: f64, x: f64) -> Result<f64, SpecFnError> {
    let q = regularized_upper_gamma(a, x)?;
    Ok(q * gamma(a))
}

/// Regularized lower `P(a, x)` by its power series; converges fast for `x < a + 1`.
fn lower_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut ap = a;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    (a * x.ln() - x - ln_gamma(a)).exp() * sum
}

/// Regularized upper `Q(a, x)` by modified Lentz on the Legendre continued fraction.
fn upper_continued_fraction(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    (a * x.ln() - x - ln_gamma(a)).exp() * h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ln_gamma_at_one_and_half() {
        assert!(ln_gamma_complex(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        let half = ln_gamma_complex(c(0.5, 0.0)).unwrap();
        assert!((half.re - 0.572_364_942_924_700_1).abs() < 1e-14);
        assert!(half.im.abs() < 1e-15);
    }

    #[test]
    fn ln_gamma_factorials() {
        let mut fact = 1.0f64;
        for n in 1..30 {
            let lg = ln_gamma(n as f64 + 1.0);
            fact *= n as f64;
            assert!((lg - fact.ln()).abs() <= 1e-13 * fact.ln().max(1.0), "n = {n}");
        }
    }

    #[test]
    fn ln_gamma_rejects_poles() {
        for k in 0..5 {
            let z = c(-(k as f64), 0.0);
            assert!(matches!(ln_gamma_complex(z), Err(SpecFnError::Pole { .. })));
        }
        assert!(ln_gamma_complex(c(-2.0, 1e-3)).is_ok());
    }

    #[test]
    fn reflection_matches_recurrence() {
        // Γ(z + 1) = z Γ(z) across the reflection boundary.
        for &(re, im) in &[(-0.3, 0.7), (-3.7, 2.0), (0.2, -5.0), (-12.5, 40.0), (0.49, 150.0)] {
            let z = c(re, im);
            let lhs = ln_gamma_complex(z + 1.0).unwrap().exp();
            let rhs = z * ln_gamma_complex(z).unwrap().exp();
            assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm(), "z = {z}");
        }
    }

    #[test]
    fn large_imaginary_part_stays_finite() {
        let z = c(-3.2, 400.0);
        let v = ln_gamma_complex(z).unwrap();
        assert!(v.re.is_finite() && v.im.is_finite());
        // |Γ(x + iy)| ~ sqrt(2π) |y|^{x - 1/2} e^{-π|y|/2}
        let approx = LN_SQRT_2PI + (z.re - 0.5) * 400f64.ln() - PI * 200.0;
        assert!((v.re - approx).abs() < 1e-3);
    }

    #[test]
    fn incomplete_gamma_reductions() {
        assert!((upper_incomplete_gamma(1.0, 1.0).unwrap() - (-1f64).exp()).abs() < 1e-15);
        assert!((upper_incomplete_gamma(2.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
        // Γ(2, x) = (1 + x) e^{-x}
        for &x in &[0.1, 1.0, 2.9, 3.1, 10.0, 40.0] {
            let got = upper_incomplete_gamma(2.0, x).unwrap();
            let want = (1.0 + x) * (-x).exp();
            assert!((got - want).abs() <= 1e-14 * want, "x = {x}");
        }
    }

    #[test]
    fn incomplete_gamma_domain() {
        assert!(upper_incomplete_gamma(0.0, 1.0).is_err());
        assert!(upper_incomplete_gamma(-1.0, 1.0).is_err());
        assert!(upper_incomplete_gamma(1.0, -1.0).is_err());
        assert_eq!(regularized_upper_gamma(0.3, f64::INFINITY).unwrap(), 0.0);
    }
}
