//! Preset handling, sweep output and the binary's exit codes.

use std::path::{Path, PathBuf};
use std::process::Command;

use rfuwoc::cli::{parse_csv, run_sweep, to_csv_string, LoadedPreset, Method, PRESET_DIR_ENV};
use rfuwoc::Execution;

const WATER: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../presets/water.toml");

fn small_preset(extra: &str) -> String {
    format!(
        r#"
name = "small"
water = "{WATER}"
axis = "main_snr_db"
rate_s = 0.5
methods = ["exact", "saturation", "oracle", "mc"]

[grid]
start = 0.0
stop = 10.0
step = 5.0

[main]
alpha = 1.2
mu = 0.5

[eve]
alpha = 1.2
mu = 0.5
snr_db = -10.0

[uwoc]
snr_db = 0.0

[mc]
trials = 20000
seed = 1
chunk_size = 3000
{extra}
[[curve]]
label = "[2.4, 0.05]"
water = "[2.4, 0.05]"
"#
    )
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rfuwoc"))
}

#[test]
fn sweep_output_round_trips_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let loaded = LoadedPreset::load(&write(dir.path(), "p.toml", &small_preset(""))).unwrap();
    let spec = &loaded.specs().unwrap()[0];
    let par = run_sweep(spec, Execution::Parallel).unwrap();
    let seq = run_sweep(spec, Execution::Sequential).unwrap();
    let text = to_csv_string(&par);
    assert_eq!(text, to_csv_string(&seq));
    assert_eq!(parse_csv(&text).unwrap(), par);
    assert_eq!(par.rows.len(), 3);
    for r in &par.rows {
        assert!(r.flags.is_empty(), "{r:?}");
        assert!(r.sop_asymptotic.is_none());
        assert!(r.mc_ci_low.unwrap() <= r.sop_mc.unwrap() && r.sop_mc.unwrap() <= r.mc_ci_high.unwrap());
        assert!((r.sop_exact.unwrap() - r.sop_oracle.unwrap()).abs() <= 1e-6);
    }
}

#[test]
fn single_point_grid() {
    let text = small_preset("").replace("stop = 10.0", "stop = 0.0");
    let dir = tempfile::tempdir().unwrap();
    let loaded = LoadedPreset::load(&write(dir.path(), "p.toml", &text)).unwrap();
    let mut spec = loaded.specs().unwrap().remove(0);
    spec.methods = [Method::Saturation].into();
    assert_eq!(run_sweep(&spec, Execution::default()).unwrap().rows.len(), 1);
}

#[test]
fn validation_errors_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (small_preset("").replace("step = 5.0", "step = -1.0"), "grid.step"),
        (
            small_preset("").replace(r#"methods = ["exact", "saturation", "oracle", "mc"]"#, "methods = []"),
            "methods",
        ),
        (small_preset("").replace("rate_s = 0.5", "rate_s = -1.0"), "rate_s"),
        (small_preset("").replace("trials = 20000", "trials = 10"), "mc.trials"),
        (small_preset("").replace("snr_db = -10.0", ""), "eve.snr_db"),
        (
            small_preset("").replace(r#"water = "[2.4, 0.05]""#, r#"water = "[9.9, 0.99]""#),
            "curve[0].water",
        ),
        (small_preset("").replace("[uwoc]", "[uwoc]\nr = 3"), "uwoc.r"),
        (small_preset("").replace("rate_s", "rate"), "rate"),
    ];
    for (i, (text, key)) in cases.iter().enumerate() {
        let p = write(dir.path(), &format!("bad{i}.toml"), text);
        let err = LoadedPreset::load(&p).unwrap_err().to_string();
        assert!(err.contains(key), "case {i}: {err:?} lacks {key:?}");

        let out = bin().args(["validate", "--preset"]).arg(&p).output().unwrap();
        assert_eq!(out.status.code(), Some(2));
        assert!(String::from_utf8_lossy(&out.stderr).contains(key));
    }
}

#[test]
fn empty_method_list_fails_before_writing() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.toml", &small_preset(""));
    let out_csv = dir.path().join("out.csv");
    let out = bin()
        .args(["sweep", "--methods", ",", "--out"])
        .arg(&out_csv)
        .arg("--preset")
        .arg(&p)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("methods"));
    assert!(!out_csv.exists());
}

#[test]
fn binary_sweep_writes_csv_and_honours_overrides() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "small.toml", &small_preset(""));
    let csv = dir.path().join("o.csv");
    let run = bin()
        .env(PRESET_DIR_ENV, dir.path())
        .args([
            "sweep",
            "--preset",
            "small",
            "--methods",
            "saturation,mc",
            "--trials",
            "10000",
            "--seed",
            "9",
            "--strict",
        ])
        .arg("--out")
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(0));
    let parsed = parse_csv(&std::fs::read_to_string(&csv).unwrap()).unwrap();
    assert_eq!(parsed.rows.len(), 3);
    assert!(parsed.rows.iter().all(|r| r.sop_exact.is_none() && r.sop_mc.is_some()));

    // the same seed through stdout gives the same bytes, sequentially too
    let out = bin()
        .env(PRESET_DIR_ENV, dir.path())
        .args([
            "--sequential",
            "sweep",
            "--preset",
            "small",
            "--methods",
            "saturation,mc",
            "--trials",
            "10000",
            "--seed",
            "9",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(out.stdout, std::fs::read(&csv).unwrap());
}

#[test]
fn unknown_preset_and_bad_method_exit_with_2() {
    let out = bin()
        .env(PRESET_DIR_ENV, "/nonexistent")
        .args(["sweep", "--preset", "no-such-preset"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["sweep", "--preset", "fig1", "--methods", "exact,magic"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("magic"));
}

#[test]
fn shipped_presets_validate() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../presets");
    for name in ["fig1", "fig2", "fig3", "fig4"] {
        let out = bin()
            .args(["validate", "--preset"])
            .arg(format!("{dir}/{name}.toml"))
            .output()
            .unwrap();
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
}
