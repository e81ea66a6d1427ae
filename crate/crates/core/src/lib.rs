//! Secrecy outage probability of a two-hop decode-and-forward link with an
//! α-μ RF first hop, an α-μ eavesdropper and an exponential-generalized-Gamma
//! underwater optical second hop.
//!
//! Three independent routes are provided and cross-checked:
//! * closed form through bivariate Fox H-functions ([`secrecy::sop_exact`]),
//! * high-SNR asymptotics and the saturation floor ([`secrecy::sop_asymptotic_main`],
//!   [`secrecy::sop_asymptotic_eve`], [`secrecy::sop_saturation`]),
//! * Monte Carlo simulation ([`mc::simulate_sop`]),
//!
//! plus a real-axis quadrature oracle ([`secrecy::sop_oracle`]).

// `!(x > 0.0)` is used on purpose so NaN is rejected with the bad values, and
// quadrature constants keep the digits of their published tables.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod channels;
pub mod cli;
pub mod exec;
pub mod mc;
pub mod secrecy;
pub mod specfn;

pub use exec::Execution;
