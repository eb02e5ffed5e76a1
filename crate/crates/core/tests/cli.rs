//! End-to-end command-line behavior through the real binary: subcommands,
//! exit codes, emitted files, and config-file override semantics.

use std::path::Path;
use std::process::{Command, Output};

fn fvhotel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fvhotel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(code(&fvhotel(&["--help"])), 0);
    assert_eq!(code(&fvhotel(&["--version"])), 0);
    assert_eq!(code(&fvhotel(&["hotel", "--help"])), 0);
}

#[test]
fn unparseable_mu_names_the_flag_and_exits_one() {
    let out = fvhotel(&["hotel", "--mu", "abc"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("--mu"), "stderr: {}", stderr(&out));
}

#[test]
fn zero_distance_names_z_and_exits_one() {
    let out = fvhotel(&["simulate", "--z", "0"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("`z`"), "stderr: {}", stderr(&out));
}

#[test]
fn detect_lists_the_single_integer_vortex() {
    let dir = tempfile::tempdir().unwrap();
    let out = fvhotel(&[
        "detect",
        "--mu",
        "1",
        "--nx",
        "128",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = std::fs::read_to_string(dir.path().join("vortices.json")).unwrap();
    let vortices: serde_json::Value = serde_json::from_str(&text).unwrap();
    let arr = vortices.as_array().unwrap();
    assert_eq!(arr.len(), 1);
    assert_eq!(arr[0]["charge"], 1);
}

#[test]
fn hotel_writes_a_half_regime_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = fvhotel(&[
        "hotel",
        "--mu",
        "1.5",
        "--nx",
        "256",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let report_path = dir.path().join("report.json");
    assert!(report_path.exists());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["regime"], "HALF");
    assert_eq!(report["correspondence"], "INF_TO_INF");
    assert_eq!(report["central_charge"], 1);
    assert!(report["pairs"].as_array().unwrap().len() >= 3);
    // companion artifacts from the default emitters
    assert!(dir.path().join("field.csv").exists());
    assert!(dir.path().join("phase.ppm").exists());
    assert!(dir.path().join("intensity.pgm").exists());
}

#[test]
fn image_dimensions_equal_grid_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let out = fvhotel(&[
        "simulate",
        "--mu",
        "1",
        "--nx",
        "48",
        "--ny",
        "32",
        "--emit-csv",
        "false",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let ppm = std::fs::read(dir.path().join("phase.ppm")).unwrap();
    assert!(ppm.starts_with(b"P6\n48 32\n255\n"));
    assert_eq!(ppm.len(), b"P6\n48 32\n255\n".len() + 48 * 32 * 3);
}

#[test]
fn sweep_reproduces_the_regime_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let out = fvhotel(&[
        "sweep",
        "--from",
        "1.44",
        "--to",
        "1.7",
        "--step",
        "0.02",
        "--nx",
        "256",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let sweep: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("sweep.json")).unwrap())
            .unwrap();
    let regimes: Vec<String> = sweep["states"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["regime"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(regimes.first().unwrap(), "PRE_HALF");
    assert_eq!(regimes.iter().filter(|r| *r == "HALF").count(), 1);
    assert_eq!(regimes.last().unwrap(), "POST_HALF");
    // ordering: every PRE_HALF before HALF, every POST_HALF after
    let half_at = regimes.iter().position(|r| r == "HALF").unwrap();
    assert!(regimes[..half_at].iter().all(|r| r == "PRE_HALF"));
    assert!(regimes[half_at + 1..].iter().all(|r| r == "POST_HALF"));
    assert!(!sweep["trajectories"].as_array().unwrap().is_empty());
}

#[test]
fn sweep_without_bounds_exits_one() {
    let out = fvhotel(&["sweep", "--step", "0.01"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn config_file_provides_values_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "mu = 1.0\nnx = 64\nemit-images = false\nout-dir = should-be-overridden\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = fvhotel(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(out_dir.join("field.csv").exists());
    assert!(!out_dir.join("phase.ppm").exists()); // images disabled by file
    assert!(!Path::new("should-be-overridden").exists()); // flag won
}

#[test]
fn bad_config_file_key_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "wavelength = 1e-6\n").unwrap();
    let out = fvhotel(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("unknown key"));
}

#[test]
fn oracle_check_passes_on_a_small_window() {
    let out = fvhotel(&[
        "oracle-check",
        "--mu",
        "1",
        "--nx",
        "32",
        "--half-width",
        "2e-4",
        "--aperture-radius",
        "1.6e-3",
        "--aperture-samples",
        "256",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("PASS"), "stdout: {stdout}");
}
