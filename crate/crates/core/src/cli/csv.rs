//! Fixed-schema CSV for sweep results.
//!
//! Floats use Rust's shortest round-trip formatting, absent values are empty
//! cells and flags are `;`-separated `method=reason` tokens.

use std::fmt::Write as _;
use std::path::Path;

use super::sweep::{Flag, SweepResult, SweepRow};
use super::CliError;

pub const HEADER: [&str; 9] = [
    "axis_db",
    "sop_exact",
    "sop_asymptotic",
    "sop_saturation",
    "sop_oracle",
    "sop_mc",
    "mc_ci_low",
    "mc_ci_high",
    "flags",
];

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn to_csv_string(result: &SweepResult) -> String {
    let mut out = HEADER.join(",");
    out.push('\n');
    for r in &result.rows {
        let flags: Vec<String> = r.flags.iter().map(Flag::to_string).collect();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.axis_db,
            cell(r.sop_exact),
            cell(r.sop_asymptotic),
            cell(r.sop_saturation),
            cell(r.sop_oracle),
            cell(r.sop_mc),
            cell(r.mc_ci_low),
            cell(r.mc_ci_high),
            flags.join(";")
        );
    }
    out
}

pub fn emit_csv(result: &SweepResult, path: &Path) -> Result<(), CliError> {
    std::fs::write(path, to_csv_string(result)).map_err(|e| CliError::io(path, e))
}

fn parse_cell(s: &str, line: usize, col: &str) -> Result<Option<f64>, CliError> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse()
        .map(Some)
        .map_err(|_| CliError::Csv(format!("line {line}, column {col}: not a number: {s:?}")))
}

pub fn parse_csv(text: &str) -> Result<SweepResult, CliError> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| CliError::Csv("empty input".into()))?;
    if header != HEADER.join(",") {
        return Err(CliError::Csv(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let n = i + 2;
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != HEADER.len() {
            return Err(CliError::Csv(format!(
                "line {n}: expected {} columns, got {}",
                HEADER.len(),
                cols.len()
            )));
        }
        let v = |k: usize| parse_cell(cols[k], n, HEADER[k]);
        let flags = if cols[8].is_empty() {
            Vec::new()
        } else {
            cols[8].split(';').map(str::parse).collect::<Result<_, _>>()?
        };
        rows.push(SweepRow {
            axis_db: v(0)?.ok_or_else(|| CliError::Csv(format!("line {n}: axis_db is empty")))?,
            sop_exact: v(1)?,
            sop_asymptotic: v(2)?,
            sop_saturation: v(3)?,
            sop_oracle: v(4)?,
            sop_mc: v(5)?,
            mc_ci_low: v(6)?,
            mc_ci_high: v(7)?,
            flags,
        });
    }
    Ok(SweepResult { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::sweep::Method;

    #[test]
    fn round_trip_is_exact() {
        let result = SweepResult {
            rows: vec![
                SweepRow {
                    axis_db: -20.0,
                    sop_exact: Some(0.1 + 0.2),
                    sop_mc: Some(1.0 / 3.0),
                    ..Default::default()
                },
                SweepRow {
                    axis_db: 2.5,
                    sop_oracle: Some(1e-300),
                    flags: vec![
                        Flag::Failed {
                            method: Method::Exact,
                            reason: "not_converged".into(),
                        },
                        Flag::Clamped {
                            method: Method::Asymptotic,
                        },
                    ],
                    ..Default::default()
                },
            ],
        };
        let text = to_csv_string(&result);
        assert_eq!(parse_csv(&text).unwrap(), result);
        assert!(text.starts_with(
            "axis_db,sop_exact,sop_asymptotic,sop_saturation,sop_oracle,sop_mc,mc_ci_low,mc_ci_high,flags\n"
        ));
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_csv("").is_err());
        assert!(parse_csv("a,b\n").is_err());
        let bad = format!("{}\n1,x,,,,,,,\n", HEADER.join(","));
        assert!(parse_csv(&bad).unwrap_err().to_string().contains("sop_exact"));
    }
}
