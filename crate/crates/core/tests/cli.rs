use std::path::Path;
use std::process::{Command, Output};

use elastowave::cli::FieldGrid;

fn run(args: &[&str], config: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_elastowave"));
    cmd.args(args);
    if let Some(c) = config {
        cmd.arg("--config").arg(c);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &tempfile::TempDir, text: &str) -> std::path::PathBuf {
    let path = dir.path().join("run.conf");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn presets_lists_both_sections() {
    let out = run(&["presets"], None);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("trajectory.preset = oscillatory"));
    assert!(text.contains("force.preset = pulse"));
}

#[test]
fn kelvin_single_point() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "material.mu = 1\nmaterial.nu = 0.25\nforce.q = 0, 0, 1\n");
    let out = run(&["sample"], Some(&cfg));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let grid = FieldGrid::from_csv(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(grid.rows.len(), 1);
    let w = 1.0 / (4.0 * std::f64::consts::PI);
    assert!((grid.rows[0].u[2] - w).abs() < 1e-14);
    assert!((grid.rows[0].beta[2][2] + w).abs() < 1e-14);
}

#[test]
fn rows_before_arrival_are_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "material.mu = 1\nmaterial.nu = 0.25\nforce.preset = ramp\nforce.q = 1, 0, 0\nforce.t_on = 0\nforce.rise = 0.5\n\
         grid.x3 = 2, 3, 2\ngrid.t = 0.5, 1.5, 3\nrun.seed = 1\n",
    );
    let out = run(&["sample", "--format", "json"], Some(&cfg));
    assert!(out.status.success());
    let grid: FieldGrid = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(grid.rows.len(), 6);
    for row in &grid.rows {
        let silent = row.u.iter().chain(row.beta.iter().flatten()).chain(&row.v).all(|v| *v == 0.0);
        // cL = sqrt(3) cT = sqrt(3)
        assert_eq!(silent, row.x[2] > 3f64.sqrt() * row.t, "{row:?}");
    }
}

#[test]
fn supersonic_config_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "material.mu = 1\ntrajectory.preset = uniform\ntrajectory.velocity = 1.5, 0, 0\n");
    let out = run(&["sample"], Some(&cfg));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn unknown_key_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "material.mu = 1\nmaterial.colour = red\n");
    let out = run(&["sample"], Some(&cfg));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("material.colour"));
}

#[test]
fn validate_exit_codes() {
    let cfg = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.conf");
    let ok = run(&["validate", "--seed", "3"], Some(&cfg));
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    let reports: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert!(reports.as_array().unwrap().iter().any(|r| r["name"] == "source.fd-consistency"));
    let bad = run(&["validate", "--inject-corruption"], None);
    assert_eq!(bad.status.code(), Some(1));
}
