use std::path::Path;
use std::process::{Command, Output};

use gtra::harness::{compare_plot, phase_plot, sweep_plot, COMPARE_METRICS};

fn gtra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gtra"))
        .args(args)
        .output()
        .unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("config.json");
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const SMALL: &str = r#"{
  "scenario": "Equal",
  "n_values": [6, 9],
  "n": 6,
  "instances": 3,
  "times": 2,
  "trials": 500,
  "master_seed": 3,
  "ga": { "population_size": 30, "generations": 30 }
}"#;

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

fn assert_well_formed(svg: &str) {
    assert!(svg.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert!(!svg.contains("NaN"));
    let mut depth = 0i32;
    for tag in svg.split('<').skip(1) {
        let head = tag.split('>').next().unwrap();
        if head.starts_with('/') {
            depth -= 1;
        } else if !head.ends_with('/') {
            depth += 1;
        }
        assert!(depth >= 0);
    }
    assert_eq!(depth, 0);
}

#[test]
fn out_of_range_gamma_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "{\n  \"scenario\": \"CmGreater\",\n  \"gamma\": 1.5\n}\n",
    );
    let out = gtra(&[
        "compare",
        "--config",
        &cfg,
        "--out",
        dir.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("gamma") && err.contains("line 3"), "{err}");
}

#[test]
fn unknown_keys_and_axes_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"gama": 0.1}"#);
    let o = dir.path().join("o");
    assert_eq!(
        gtra(&["solve", "--config", &cfg, "--out", o.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let cfg = write_config(dir.path(), SMALL);
    let out = gtra(&[
        "sweep",
        "--config",
        &cfg,
        "--out",
        o.to_str().unwrap(),
        "--axis",
        "beta",
        "--values",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = gtra(&[
        "solve",
        "--config",
        "/nonexistent.json",
        "--out",
        o.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn desk_scale_limit_needs_paper_scale() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"n": 500}"#);
    let out = gtra(&[
        "solve",
        "--config",
        &cfg,
        "--out",
        dir.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--paper-scale"));
}

#[test]
fn compare_csv_shape_and_plots_follow_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("o");
    assert!(
        gtra(&["compare", "--config", &cfg, "--out", out.to_str().unwrap()])
            .status
            .success()
    );
    let csv = read(&out, "compare.csv");
    // instances x 5 strategies + 5 mean rows, per N, plus the header.
    assert_eq!(csv.lines().count(), 1 + 2 * (3 * 5 + 5));
    for (metric, title) in COMPARE_METRICS {
        let svg = read(&out, &format!("{metric}.svg"));
        assert_well_formed(&svg);
        assert_eq!(svg, compare_plot(&csv, metric, title).unwrap().render());
        assert_eq!(svg.matches("<polyline").count(), 5);
    }
}

#[test]
fn sweep_and_dynamics_plots_follow_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("s");
    let status = gtra(&[
        "sweep",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
        "--axis",
        "lambda",
        "--values",
        "0,1.5,4",
    ]);
    assert!(status.status.success());
    let svg = read(&out, "utilities.svg");
    assert_well_formed(&svg);
    assert_eq!(svg, sweep_plot(&read(&out, "sweep.csv")).unwrap().render());

    let out = dir.path().join("d");
    assert!(
        gtra(&["dynamics", "--config", &cfg, "--out", out.to_str().unwrap()])
            .status
            .success()
    );
    let svg = read(&out, "phase_portrait.svg");
    assert_well_formed(&svg);
    let plot = phase_plot(
        &read(&out, "trajectories.csv"),
        &read(&out, "equilibrium.csv"),
    )
    .unwrap();
    assert_eq!(svg, plot.render());
    assert_eq!(plot.series.len(), 16);
}

#[test]
fn seed_flag_changes_results_and_reruns_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let run = |name: &str, seed: &str| {
        let out = dir.path().join(name);
        assert!(gtra(&[
            "solve",
            "--config",
            &cfg,
            "--out",
            out.to_str().unwrap(),
            "--seed",
            seed
        ])
        .status
        .success());
        read(&out, "q_star.csv")
    };
    assert_eq!(run("a", "1"), run("b", "1"));
    assert_ne!(run("a", "1"), run("c", "2"));
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("env");
    let status = Command::new(env!("CARGO_BIN_EXE_gtra"))
        .args(["dynamics", "--config", &cfg])
        .env("GTRA_OUT_DIR", &out)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(out.join("manifest.json").exists());
    let missing = Command::new(env!("CARGO_BIN_EXE_gtra"))
        .args(["dynamics", "--config", &cfg])
        .env_remove("GTRA_OUT_DIR")
        .status()
        .unwrap();
    assert_eq!(missing.code(), Some(2));
}
