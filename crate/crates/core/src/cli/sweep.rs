use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::exec::{map_slice, Execution};
use crate::mc::{simulate_sop_with, McConfig};
use crate::secrecy::{
    db_to_linear, sop_asymptotic_eve, sop_asymptotic_main, sop_exact_with, sop_oracle, sop_saturation, Contours,
    SecrecyError, SecrecyScenario, SopResult,
};
use crate::specfn::{ContourSpec, SpecFnError};

/// Oracle tolerance used for the `sop_oracle` column.
pub const SWEEP_ORACLE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Asymptotic,
    Saturation,
    Oracle,
    Mc,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Exact,
        Method::Asymptotic,
        Method::Saturation,
        Method::Oracle,
        Method::Mc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Asymptotic => "asymptotic",
            Method::Saturation => "saturation",
            Method::Oracle => "oracle",
            Method::Mc => "mc",
        }
    }
}

impl FromStr for Method {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL.into_iter().find(|m| m.name() == s.trim()).ok_or_else(|| {
            CliError::Config(format!(
                "methods: unknown method {s:?} (expected exact, asymptotic, saturation, oracle or mc)"
            ))
        })
    }
}

/// Parse a comma-separated method list.
pub fn parse_methods(list: &str) -> Result<BTreeSet<Method>, CliError> {
    let set = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect::<Result<BTreeSet<_>, _>>()?;
    if set.is_empty() {
        return Err(CliError::Config("methods: must list at least one method".into()));
    }
    Ok(set)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    MainSnrDb,
    EveSnrDb,
}

/// Inclusive dB grid `start, start + step, ..., <= stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(CliError::Config(format!(
                "grid.step: must be positive, got {}",
                self.step
            )));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) || self.start > self.stop {
            return Err(CliError::Config(format!(
                "grid.start/grid.stop: need finite start <= stop, got {} and {}",
                self.start, self.stop
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub label: String,
    /// Template; the swept SNR is replaced at every grid point.
    pub scenario: SecrecyScenario,
    pub axis: SweepAxis,
    pub grid: Grid,
    pub methods: BTreeSet<Method>,
    pub mc: Option<McConfig>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.methods.is_empty() {
            return Err(CliError::Config("methods: must list at least one method".into()));
        }
        self.grid.validate()?;
        if let Some(mc) = &self.mc {
            mc.validate().map_err(|e| CliError::Config(format!("mc: {e}")))?;
        }
        self.scenario.validate().map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn scenario_at(&self, axis_db: f64) -> Result<SecrecyScenario, SecrecyError> {
        match self.axis {
            SweepAxis::MainSnrDb => self.scenario.with_main_snr(db_to_linear(axis_db)),
            SweepAxis::EveSnrDb => self.scenario.with_eve_snr(db_to_linear(axis_db)),
        }
    }
}

/// Per-point note attached to a method's column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Flag {
    /// The method returned no value; the reason is a short snake_case tag.
    Failed { method: Method, reason: String },
    /// The value fell outside `[0, 1]` and was clamped.
    Clamped { method: Method },
}

impl Flag {
    pub fn is_failure(&self) -> bool {
        matches!(self, Flag::Failed { .. })
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flag::Failed { method, reason } => write!(f, "{}={reason}", method.name()),
            Flag::Clamped { method } => write!(f, "{}=clamped", method.name()),
        }
    }
}

impl FromStr for Flag {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (m, reason) = s
            .split_once('=')
            .ok_or_else(|| CliError::Csv(format!("malformed flag {s:?}")))?;
        let method: Method = m
            .parse()
            .map_err(|_| CliError::Csv(format!("unknown method in flag {s:?}")))?;
        Ok(if reason == "clamped" {
            Flag::Clamped { method }
        } else {
            Flag::Failed {
                method,
                reason: reason.to_string(),
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepRow {
    pub axis_db: f64,
    pub sop_exact: Option<f64>,
    pub sop_asymptotic: Option<f64>,
    pub sop_saturation: Option<f64>,
    pub sop_oracle: Option<f64>,
    pub sop_mc: Option<f64>,
    pub mc_ci_low: Option<f64>,
    pub mc_ci_high: Option<f64>,
    pub flags: Vec<Flag>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn has_failures(&self) -> bool {
        self.rows.iter().any(|r| r.flags.iter().any(Flag::is_failure))
    }
}

fn reason(e: &SecrecyError) -> &'static str {
    match e {
        SecrecyError::SpecFn(SpecFnError::NotConverged { .. }) | SecrecyError::NotConverged { .. } => "not_converged",
        SecrecyError::SpecFn(SpecFnError::ContourInfeasible(_)) => "contour_infeasible",
        SecrecyError::OracleDisagreement { .. } => "oracle_disagreement",
        SecrecyError::SpecFn(SpecFnError::Pole { .. }) => "pole",
        _ => "error",
    }
}

fn record(method: Method, res: Result<SopResult, SecrecyError>, flags: &mut Vec<Flag>) -> Option<f64> {
    match res {
        Ok(r) if (0.0..=1.0).contains(&r.value) => Some(r.value),
        Ok(r) if r.value.is_finite() => {
            flags.push(Flag::Clamped { method });
            Some(r.value.clamp(0.0, 1.0))
        }
        Ok(_) => {
            flags.push(Flag::Failed {
                method,
                reason: "non_finite".into(),
            });
            None
        }
        Err(e) => {
            log::warn!("{} failed: {e}", method.name());
            flags.push(Flag::Failed {
                method,
                reason: reason(&e).into(),
            });
            None
        }
    }
}

fn evaluate_point(spec: &SweepSpec, index: usize, axis_db: f64, exec: Execution) -> SweepRow {
    let mut row = SweepRow {
        axis_db,
        ..Default::default()
    };
    let s = match spec.scenario_at(axis_db) {
        Ok(s) => s,
        Err(e) => {
            for &m in &spec.methods {
                row.flags.push(Flag::Failed {
                    method: m,
                    reason: reason(&e).into(),
                });
            }
            return row;
        }
    };
    let contour = ContourSpec::univariate();
    for &m in &spec.methods {
        match m {
            Method::Exact => row.sop_exact = record(m, sop_exact_with(&s, &Contours::default(), exec), &mut row.flags),
            Method::Asymptotic => {
                let r = match spec.axis {
                    SweepAxis::MainSnrDb => sop_asymptotic_main(&s, &contour),
                    SweepAxis::EveSnrDb => sop_asymptotic_eve(&s, &contour),
                };
                row.sop_asymptotic = record(m, r, &mut row.flags);
            }
            Method::Saturation => row.sop_saturation = record(m, sop_saturation(&s, &contour), &mut row.flags),
            Method::Oracle => row.sop_oracle = record(m, sop_oracle(&s, SWEEP_ORACLE_TOL), &mut row.flags),
            Method::Mc => {
                let mut cfg = spec.mc.unwrap_or_default();
                cfg.master_seed = point_seed(cfg.master_seed, index);
                match simulate_sop_with(&s, &cfg, exec) {
                    Ok(est) => {
                        row.sop_mc = Some(est.sop_hat);
                        row.mc_ci_low = Some(est.ci_low);
                        row.mc_ci_high = Some(est.ci_high);
                    }
                    Err(e) => {
                        log::warn!("mc failed: {e}");
                        row.flags.push(Flag::Failed {
                            method: m,
                            reason: "error".into(),
                        });
                    }
                }
            }
        }
    }
    row
}

/// Independent Monte Carlo seed for grid point `index` (SplitMix64 finalizer),
/// so neighbouring points do not share random numbers.
pub fn point_seed(master_seed: u64, index: usize) -> u64 {
    let mut z = master_seed.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Evaluate every requested method at every grid point. Points run through
/// `exec`; rows come back in grid order and per-point failures become flags.
pub fn run_sweep(spec: &SweepSpec, exec: Execution) -> Result<SweepResult, CliError> {
    spec.validate()?;
    let points: Vec<(usize, f64)> = spec.grid.points().into_iter().enumerate().collect();
    let rows = map_slice(exec, &points, |&(i, db)| evaluate_point(spec, i, db, exec));
    Ok(SweepResult { rows })
}
