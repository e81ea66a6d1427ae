//! Channel-layer properties: normalization, CCDF consistency, sampler
//! goodness of fit and the two CCDF evaluation paths.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rfuwoc::channels::{AlphaMuLink, EggLink, WaterPresets};
use rfuwoc::mc::ks_validate;
use rfuwoc::specfn::quad::{integrate, QuadOptions};
use rfuwoc::specfn::ContourSpec;

fn water() -> WaterPresets {
    WaterPresets::load(concat!(env!("CARGO_MANIFEST_DIR"), "/../../presets/water.toml").as_ref()).unwrap()
}

/// ∫_0^∞ f(γ) dγ with γ = e^t over `ln(scale) + [-lo, hi]`.
fn integrate_log(f: impl Fn(f64) -> f64, scale: f64, lo: f64, hi: f64) -> f64 {
    let c = scale.ln();
    let pts: Vec<f64> = (0..=200).map(|i| c - lo + (lo + hi) * i as f64 / 200.0).collect();
    let q = integrate(
        |t| {
            let g = t.exp();
            f(g) * g
        },
        &pts,
        QuadOptions::new(1e-14, 1e-12, 2_000_000),
    );
    assert!(q.converged, "quadrature did not converge: {q:?}");
    q.value
}

fn rf_cases() -> Vec<AlphaMuLink> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut v = vec![
        AlphaMuLink::new(1.2, 0.5, 1.0).unwrap(),
        AlphaMuLink::new(0.9, 1.5, 1e3).unwrap(),
        AlphaMuLink::new(1.2, 0.5, 0.01).unwrap(),
    ];
    for _ in 0..10 {
        let alpha = rng.random_range(0.6..3.0);
        let mu = rng.random_range(0.4..3.0);
        let snr = 10f64.powf(rng.random_range(-2.0..4.0));
        v.push(AlphaMuLink::new(alpha, mu, snr).unwrap());
    }
    v
}

fn egg_cases() -> Vec<EggLink> {
    let w = water();
    let mut v = Vec::new();
    for s in &w.scenarios {
        for (r, mu_r) in [(1u8, 1.0), (2u8, 0.01), (2u8, 1.0), (2u8, 100.0)] {
            v.push(s.egg(r, mu_r).unwrap());
        }
    }
    v
}

#[test]
fn alpha_mu_pdf_normalizes_and_has_unit_mean_scale() {
    for l in rf_cases() {
        let lo = 80.0 / (l.alpha * l.mu).min(1.0);
        let mass = integrate_log(|g| l.pdf(g).unwrap(), l.mean_snr, lo, 8.0);
        assert!((mass - 1.0).abs() <= 1e-6, "{l:?}: mass {mass}");
        let mean = integrate_log(|g| g * l.pdf(g).unwrap(), l.mean_snr, lo, 8.0);
        assert!((mean / l.mean_snr - 1.0).abs() <= 1e-6, "{l:?}: mean {mean}");
    }
}

#[test]
fn egg_pdf_normalizes() {
    for l in egg_cases() {
        let mass = integrate_log(|g| l.pdf(g).unwrap(), l.mu_r, 120.0, 12.0);
        assert!((mass - 1.0).abs() <= 1e-6, "{l:?}: mass {mass}");
    }
}

#[test]
fn ccdf_matches_integrated_pdf() {
    for l in egg_cases() {
        for q in [0.01, 0.3, 1.0, 3.0] {
            let g0 = q * l.mu_r;
            let tail = integrate_log(|g| if g >= g0 { l.pdf(g).unwrap() } else { 0.0 }, g0, 0.0, 12.0);
            let want = l.ccdf(g0).unwrap();
            assert!((tail - want).abs() <= 1e-8, "{l:?} at {g0}: {tail} vs {want}");
        }
    }
    for l in rf_cases().into_iter().take(5) {
        for q in [0.1, 1.0, 4.0] {
            let g0 = q * l.mean_snr;
            let tail = integrate_log(|g| if g >= g0 { l.pdf(g).unwrap() } else { 0.0 }, g0, 0.0, 8.0);
            assert!((tail - l.ccdf(g0).unwrap()).abs() <= 1e-8, "{l:?} at {g0}");
        }
    }
}

#[test]
fn ccdf_is_monotone_with_correct_limits() {
    let grid: Vec<f64> = (0..1000).map(|i| 10f64.powf(-6.0 + 12.0 * i as f64 / 999.0)).collect();
    let check = |name: &str, ccdf: &dyn Fn(f64) -> f64| {
        assert_eq!(ccdf(0.0), 1.0, "{name}");
        let vals: Vec<f64> = grid.iter().map(|&g| ccdf(g)).collect();
        assert!(vals.windows(2).all(|w| w[1] <= w[0]), "{name}: not monotone");
        assert!(vals.iter().all(|v| (0.0..=1.0).contains(v)), "{name}: out of range");
        assert!(vals[999] < 1e-12, "{name}: tail {}", vals[999]);
    };
    for l in rf_cases().into_iter().take(3) {
        check(&format!("{l:?}"), &|g| l.ccdf(g).unwrap());
    }
    for l in egg_cases().into_iter().filter(|l| l.mu_r <= 1.0) {
        check(&format!("{l:?}"), &|g| l.ccdf(g).unwrap());
    }
}

#[test]
fn h_function_ccdf_matches_direct_path() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let contour = ContourSpec::univariate();
    for _ in 0..30 {
        let l = AlphaMuLink::new(
            rng.random_range(0.6..3.0),
            rng.random_range(0.4..3.0),
            rng.random_range(0.1..10.0),
        )
        .unwrap();
        let g = l.mean_snr * rng.random_range(0.05..3.0);
        let direct = l.ccdf(g).unwrap();
        let h = l.ccdf_fox_h(g, &contour).unwrap();
        assert!(((h - direct) / direct).abs() <= 1e-8, "{l:?} at {g}: {h} vs {direct}");
    }
}

#[test]
fn samplers_pass_ks() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for l in [
        AlphaMuLink::new(1.2, 0.5, 1.0).unwrap(),
        AlphaMuLink::new(0.9, 1.5, 10.0).unwrap(),
    ] {
        let s = l.sampler();
        let ks = ks_validate(
            |r: &mut ChaCha8Rng| s.sample(r),
            |g| l.cdf(g).unwrap(),
            100_000,
            &mut rng,
        )
        .unwrap();
        assert!(ks.passed, "{l:?}: {ks:?}");
    }
    for s in &water().scenarios {
        let l = s.egg(2, 1.0).unwrap();
        let smp = l.sampler();
        let ks = ks_validate(
            |r: &mut ChaCha8Rng| smp.sample(r),
            |g| l.cdf(g).unwrap(),
            100_000,
            &mut rng,
        )
        .unwrap();
        assert!(ks.passed, "{}: {ks:?}", s.label);
    }
}

#[test]
fn ks_rejects_a_wrong_model() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let l = AlphaMuLink::new(1.2, 0.5, 1.0).unwrap();
    let wrong = AlphaMuLink::new(1.2, 0.5, 1.1).unwrap();
    let s = l.sampler();
    let ks = ks_validate(
        |r: &mut ChaCha8Rng| s.sample(r),
        |g| wrong.cdf(g).unwrap(),
        100_000,
        &mut rng,
    )
    .unwrap();
    assert!(!ks.passed, "{ks:?}");
}

#[test]
fn sample_mean_matches_mean_snr() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let l = AlphaMuLink::new(2.0, 1.0, 3.0).unwrap();
    let n = 1_000_000;
    let xs: Vec<f64> = (0..n).map(|_| l.sample(&mut rng)).collect();
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    assert!((mean - 3.0).abs() <= 4.0 * (var / n as f64).sqrt(), "mean {mean}");
}
