//! Black-box tests of the `srips` binary: subcommand round trips, exit
//! codes and bundle layout.

use std::fs;
use std::process::Command;

fn srips() -> Command {
    Command::new(env!("CARGO_BIN_EXE_srips"))
}

#[test]
fn experiment_bundle_layout() {
    let dir = tempfile::tempdir().unwrap();
    let out = srips()
        .args(["experiment", "--preset", "circle"])
        .args(["--out-dir", dir.path().to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    for file in [
        "config.toml",
        "metric.txt",
        "filtration_stats.txt",
        "diagram.csv",
        "diagram.svg",
        "summary.txt",
        "localization.json",
        "loop_path.csv",
    ] {
        assert!(dir.path().join(file).exists(), "missing {file}");
    }
    // The circle model has no ambient cloud.
    assert!(!dir.path().join("cloud.csv").exists());
}

#[test]
fn sample_metric_persist_compare_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.toml");
    fs::write(
        &config,
        r#"
name = "tiny"
seed = 3
output_dir = "unused"
thin_min_dist = 0.35
link_radius = 0.7

[sampler]
kind = "cut_sphere"
count = 400
height = 0.35

[params]
max_clusters = 3
max_dim = 3
r_max = 1.2
p = 2

[params.a]
kind = "identity"

[params.b]
kind = "linear"
slope = 0.3
"#,
    )
    .unwrap();

    let cloud = dir.path().join("cloud.csv");
    let out = srips()
        .args(["sample", "--config", config.to_str().unwrap()])
        .args(["--out", cloud.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "sample: {}", String::from_utf8_lossy(&out.stderr));

    let metric = dir.path().join("metric.txt");
    let out = srips()
        .args(["metric", "--cloud", cloud.to_str().unwrap()])
        .args(["--link-radius", "0.7", "--out", metric.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "metric: {}", String::from_utf8_lossy(&out.stderr));

    let diagram = dir.path().join("diagram.csv");
    let out = srips()
        .args(["persist", "--metric", metric.to_str().unwrap()])
        .args(["--b", "linear:0.3", "--r-max", "1.2"])
        .args(["--out", diagram.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "persist: {}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&diagram).unwrap();
    assert!(text.lines().count() > 1, "diagram is empty");

    // A diagram compared with itself is at distance zero.
    let out = srips()
        .arg("compare")
        .args([diagram.to_str().unwrap(), diagram.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "compare: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("overall distance 0.000000"), "stdout: {stdout}");
}

#[test]
fn filtrate_writes_simplices() {
    let dir = tempfile::tempdir().unwrap();
    // Six points on an exact circle through the library, via a tiny
    // experiment bundle, reusing its metric file.
    let bundle = dir.path().join("bundle");
    let out = srips()
        .args(["experiment", "--preset", "circle"])
        .args(["--out-dir", bundle.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let filtration = dir.path().join("filtration.txt");
    let out = srips()
        .args(["filtrate", "--metric", bundle.join("metric.txt").to_str().unwrap()])
        .args(["--max-dim", "2", "--r-max", "1.0"])
        .args(["--out", filtration.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "filtrate: {}", String::from_utf8_lossy(&out.stderr));
    assert!(fs::read_to_string(&filtration).unwrap().lines().count() > 120);
}

#[test]
fn localize_emits_triple() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("bundle");
    let out = srips()
        .args(["experiment", "--preset", "circle"])
        .args(["--out-dir", bundle.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let prefix = dir.path().join("loop");
    let out = srips()
        .args(["localize", "--metric", bundle.join("metric.txt").to_str().unwrap()])
        .args(["--max-dim", "2", "--r-max", "2.83", "--dim", "1"])
        .args(["--out-prefix", prefix.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "localize: {}", String::from_utf8_lossy(&out.stderr));
    let json = fs::read_to_string(dir.path().join("loop.json")).unwrap();
    assert!(json.contains("\"triple\""), "json: {json}");
    assert!(dir.path().join("loop_path.csv").exists());
}

#[test]
fn config_errors_exit_2() {
    // Unknown preset.
    let out = srips().args(["experiment", "--preset", "fig9"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // Config whose cluster map exceeds the diameter map.
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    fs::write(
        &config,
        r#"
name = "bad"
seed = 0
output_dir = "unused"

[sampler]
kind = "circle"
count = 12
circumference = 6.28

[params]
max_clusters = 3
max_dim = 2
r_max = 2.0
p = 2

[params.a]
kind = "identity"

[params.b]
kind = "linear"
slope = 2.0
"#,
    )
    .unwrap();
    let out = srips()
        .args(["experiment", "--config", config.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn budget_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("bundle");
    let out = srips()
        .args(["experiment", "--preset", "circle"])
        .args(["--out-dir", bundle.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = srips()
        .args(["persist", "--metric", bundle.join("metric.txt").to_str().unwrap()])
        .args(["--max-dim", "2", "--r-max", "1.0", "--simplex-budget", "10"])
        .args(["--out", dir.path().join("d.csv").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}
