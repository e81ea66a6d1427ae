//! Monte Carlo SOP estimation and Kolmogorov–Smirnov sampler checks.
//!
//! Trials are cut into fixed-size chunks. Chunk `i` draws from a ChaCha8
//! stream keyed by `(master_seed, i)`, so the estimate depends only on the seed,
//! the trial count and the chunk size, never on how chunks are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::{map_range, Execution};
use crate::secrecy::SecrecyScenario;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;
/// `sqrt(-ln(0.005) / 2)`, the asymptotic two-sided KS quantile at 1%.
const KS_K_01: f64 = 1.627_624_300_016_0;
/// Below this many trials the Wilson interval is not trusted.
pub const MIN_TRIALS: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum McError {
    #[error("invalid Monte Carlo configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum McMode {
    /// Outage iff `log2((1 + min(γ₁,γ₂)) / (1 + γ_e))^+ <= R_s`.
    ExactDefinition,
    /// Outage iff `min(γ₁,γ₂) <= Θ γ_e`.
    #[default]
    LowerBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub trials: u64,
    pub master_seed: u64,
    pub chunk_size: u64,
    pub mode: McMode,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            trials: 10_000_000,
            master_seed: 0x5EC0_11D5,
            chunk_size: 100_000,
            mode: McMode::LowerBound,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<(), McError> {
        if self.trials < MIN_TRIALS {
            return Err(McError::InvalidConfig(format!(
                "trials must be >= {MIN_TRIALS}, got {}",
                self.trials
            )));
        }
        if self.chunk_size == 0 {
            return Err(McError::InvalidConfig("chunk_size must be positive".into()));
        }
        Ok(())
    }

    fn chunks(&self) -> u64 {
        self.trials.div_ceil(self.chunk_size)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub sop_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub trials_used: u64,
    pub outages: u64,
}

/// Wilson score interval at 95%.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0).min(p), (center + half).min(1.0).max(p))
}

/// Stream for chunk `index` of a run seeded with `master_seed`.
pub fn chunk_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

pub fn simulate_sop(s: &SecrecyScenario, cfg: &McConfig) -> Result<McEstimate, McError> {
    simulate_sop_with(s, cfg, Execution::default())
}

pub fn simulate_sop_with(s: &SecrecyScenario, cfg: &McConfig, exec: Execution) -> Result<McEstimate, McError> {
    cfg.validate()?;
    s.validate().map_err(|e| McError::InvalidConfig(e.to_string()))?;
    let main = s.main_rf.sampler();
    let uwoc = s.uwoc.sampler();
    let eve = s.eavesdropper_rf.sampler();
    let theta = s.theta();
    let rate = s.rate_s;
    let mode = cfg.mode;

    let n_chunks = cfg.chunks();
    let counts = map_range(exec, n_chunks as usize, |i| {
        let i = i as u64;
        let len = cfg.chunk_size.min(cfg.trials - i * cfg.chunk_size);
        let mut rng = chunk_rng(cfg.master_seed, i);
        let mut outages = 0u64;
        for _ in 0..len {
            let g1 = main.sample(&mut rng);
            let g2 = uwoc.sample(&mut rng);
            let ge = eve.sample(&mut rng);
            let g = g1.min(g2);
            let outage = match mode {
                McMode::LowerBound => g <= theta * ge,
                McMode::ExactDefinition => ((1.0 + g) / (1.0 + ge)).log2().max(0.0) <= rate,
            };
            outages += u64::from(outage);
        }
        outages
    });
    let outages: u64 = counts.iter().sum();
    let (ci_low, ci_high) = wilson_interval(outages, cfg.trials);
    Ok(McEstimate {
        sop_hat: outages as f64 / cfg.trials as f64,
        ci_low,
        ci_high,
        trials_used: cfg.trials,
        outages,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsOutcome {
    pub statistic: f64,
    pub critical: f64,
    pub passed: bool,
}

/// One-sample two-sided KS test of `n` draws against `cdf` at the 1% level.
pub fn ks_validate<R, S, F>(mut sampler: S, cdf: F, n: usize, rng: &mut R) -> Result<KsOutcome, McError>
where
    R: Rng + ?Sized,
    S: FnMut(&mut R) -> f64,
    F: Fn(f64) -> f64,
{
    if (n as u64) < MIN_TRIALS {
        return Err(McError::InvalidConfig(format!(
            "KS test needs n >= {MIN_TRIALS}, got {n}"
        )));
    }
    let mut xs: Vec<f64> = (0..n).map(|_| sampler(rng)).collect();
    xs.sort_by(f64::total_cmp);
    let nf = n as f64;
    let statistic = xs.iter().enumerate().fold(0.0f64, |d, (i, &x)| {
        let f = cdf(x);
        d.max((i + 1) as f64 / nf - f).max(f - i as f64 / nf)
    });
    // Stephens' finite-sample correction
    let sq = nf.sqrt();
    let critical = KS_K_01 / (sq + 0.12 + 0.11 / sq);
    Ok(KsOutcome {
        statistic,
        critical,
        passed: statistic <= critical,
    })
}
