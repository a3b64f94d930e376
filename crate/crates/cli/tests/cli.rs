use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mipt(args: &[&str], threads_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mipt-qfi"));
    cmd.args(args).env_remove("MIPT_QFI_THREADS");
    if let Some(t) = threads_env {
        cmd.env("MIPT_QFI_THREADS", t);
    }
    cmd.output().unwrap()
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn default_run_writes_csv_summary_and_timing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = mipt(&["spectrum", "--out", out], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    assert!(csv.starts_with("k,E,Gamma\n"));
    assert_eq!(csv.lines().count(), 1 + 32);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("spectrum.summary.json")).unwrap()).unwrap();
    assert_eq!(summary["config"]["experiment"], "spectrum");
    assert!(summary["results"]["fits"].is_array() && summary["results"]["checks"].is_array());
    assert!(summary["versions"]["core"].is_string());
    let timing: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("spectrum.timing.json")).unwrap()).unwrap();
    assert!(timing["wall_time_s"].as_f64().unwrap() >= 0.0);
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let unknown = write_config(dir.path(), "a.json", r#"{"experiment": "spectrum", "n_site": 8}"#);
    let o = mipt(&["spectrum", "--config", &unknown, "--out", out], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("n_site"));

    let other = write_config(dir.path(), "b.json", r#"{"experiment": "fbar-sweep"}"#);
    assert_eq!(mipt(&["spectrum", "--config", &other, "--out", out], None).status.code(), Some(2));

    let broken = write_config(dir.path(), "c.json", "{");
    assert_eq!(mipt(&["spectrum", "--config", &broken, "--out", out], None).status.code(), Some(2));

    assert_eq!(mipt(&["spectrum", "--out", out], Some("many")).status.code(), Some(2));
    let o = mipt(&["spectrum", "--config", "/nonexistent/cfg.json", "--out", out], None);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn failed_check_exits_3_after_writing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "w.json",
        r#"{"experiment": "witness-scaling", "sizes": [8, 12, 16], "t": 1.0, "expected_exponent": 3.0, "exponent_tolerance": 0.1}"#,
    );
    let o = mipt(&["witness-scaling", "--config", &cfg, "--out", dir.path().to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(3));
    let s = fs::read_to_string(dir.path().join("witness-scaling.summary.json")).unwrap();
    assert!(s.contains("\"passed\": false"));
}

#[test]
fn divergent_point_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "f.json", r#"{"experiment": "fbar-sweep", "n_sites": 32, "gammas": [3.0, 3.2, 3.4]}"#);
    let o = mipt(&["fbar-sweep", "--config", &cfg, "--out", dir.path().to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(4), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn unwritable_output_exits_5() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain");
    fs::write(&file, "x").unwrap();
    let o = mipt(&["spectrum", "--out", file.join("sub").to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn output_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "q.json", r#"{"experiment": "quench-series", "gamma": 0.2, "n_sites": 32}"#);
    let mut texts = Vec::new();
    for (i, (flag, env)) in [("1", None), ("1", Some("3")), ("2", Some("0"))].into_iter().enumerate() {
        let out = dir.path().join(format!("run{i}"));
        let o = mipt(&["quench-series", "--config", &cfg, "--out", out.to_str().unwrap(), "--threads", flag], env);
        assert_eq!(o.status.code(), Some(0));
        texts.push((
            fs::read(out.join("quench-series.csv")).unwrap(),
            fs::read(out.join("quench-series.summary.json")).unwrap(),
        ));
    }
    assert!(texts.windows(2).all(|w| w[0] == w[1]));
}
