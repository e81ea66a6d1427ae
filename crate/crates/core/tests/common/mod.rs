//! Shared fixtures for the integration and acceptance tests.

use rfuwoc::channels::AlphaMuLink;
use rfuwoc::specfn::{gamma, regularized_upper_gamma, upper_incomplete_gamma, FoxHParams};

pub const ZS: [f64; 4] = [0.01, 0.1, 1.0, 10.0];

fn h(m: usize, n: usize, upper: &[(f64, f64)], lower: &[(f64, f64)]) -> FoxHParams {
    FoxHParams::new(m, n, upper.to_vec(), lower.to_vec()).unwrap()
}

/// `(name, params, prefactor(z), closed form(z))`; the H value times the
/// prefactor must equal the closed form.
pub type Identity = (
    &'static str,
    FoxHParams,
    Box<dyn Fn(f64) -> f64>,
    Box<dyn Fn(f64) -> f64>,
);

pub fn identities() -> Vec<Identity> {
    let one = || -> Box<dyn Fn(f64) -> f64> { Box::new(|_| 1.0) };
    let mut v: Vec<Identity> = vec![
        ("exp", h(1, 0, &[], &[(0.0, 1.0)]), one(), Box::new(|z: f64| (-z).exp())),
        (
            "exp of z^2",
            h(1, 0, &[], &[(0.0, 0.5)]),
            Box::new(|_| 0.5),
            Box::new(|z: f64| (-z * z).exp()),
        ),
        (
            "exp of z^0.7",
            h(1, 0, &[], &[(0.0, 1.0 / 0.7)]),
            Box::new(|_| 1.0 / 0.7),
            Box::new(|z: f64| (-z.powf(0.7)).exp()),
        ),
        (
            "z e^-z",
            h(1, 0, &[], &[(1.0, 1.0)]),
            one(),
            Box::new(|z: f64| z * (-z).exp()),
        ),
        (
            "z^2 e^-z",
            h(1, 0, &[], &[(2.0, 1.0)]),
            one(),
            Box::new(|z: f64| z * z * (-z).exp()),
        ),
        (
            "1/(1+z)",
            h(1, 1, &[(0.0, 1.0)], &[(0.0, 1.0)]),
            one(),
            Box::new(|z: f64| 1.0 / (1.0 + z)),
        ),
        (
            "Gamma(2.5)/(1+z)^2.5",
            h(1, 1, &[(-1.5, 1.0)], &[(0.0, 1.0)]),
            one(),
            Box::new(|z: f64| gamma(2.5) * (1.0 + z).powf(-2.5)),
        ),
        (
            "sqrt(pi) e^{-2 sqrt z}",
            h(2, 0, &[], &[(0.0, 1.0), (0.5, 1.0)]),
            one(),
            Box::new(|z: f64| std::f64::consts::PI.sqrt() * (-2.0 * z.sqrt()).exp()),
        ),
    ];
    for a in [0.5, 1.0, 2.5] {
        v.push((
            "Gamma(a, z)",
            h(2, 0, &[(1.0, 1.0)], &[(0.0, 1.0), (a, 1.0)]),
            one(),
            Box::new(move |z: f64| upper_incomplete_gamma(a, z).unwrap()),
        ));
    }
    for (alpha, mu) in [(1.2, 0.5), (1.7, 0.8)] {
        // Γ(μ, z^α) through the tail form
        v.push((
            "Gamma(mu, z^alpha)",
            h(2, 0, &[(1.0, 1.0)], &[(0.0, 1.0), (mu, 1.0 / alpha)]),
            one(),
            Box::new(move |z: f64| upper_incomplete_gamma(mu, z.powf(alpha)).unwrap()),
        ));
    }
    for (alpha, mu) in [(1.0, 1.0), (0.9, 1.5), (2.0, 0.7)] {
        // α-μ CCDF at γ̄ = 1 with argument z = γΛ
        let link = AlphaMuLink::new(alpha, mu, 1.0).unwrap();
        let lam = link.lambda();
        let kappa = link.kappa();
        v.push((
            "alpha-mu ccdf",
            link.ccdf_h_params(),
            Box::new(move |z: f64| z / lam * kappa),
            Box::new(move |z: f64| regularized_upper_gamma(mu, z.powf(alpha)).unwrap()),
        ));
    }
    v
}
