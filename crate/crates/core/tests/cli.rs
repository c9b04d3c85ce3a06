use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn delaykern(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_delaykern"))
        .args(args)
        .current_dir(dir)
        .env_remove("DELAYKERN_COMMAND")
        .env_remove("DELAYKERN_CONFIG")
        .env_remove("DELAYKERN_OUT")
        .env_remove("DELAYKERN_FORMAT")
        .output()
        .expect("binary runs")
}

fn run_ok(args: &[&str], dir: &Path) {
    let out = delaykern(args, dir);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

/// Columns of a CSV file; empty cells become `None`.
fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<Option<f64>>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|c| c.parse().ok()).collect()).collect();
    (header, rows)
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn regions_nest() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&["regions", "--out", "r"], dir.path());
    let (header, rows) = read_csv(&dir.path().join("r/regions.csv"));
    assert_eq!(header, ["a", "k_upper", "k_cheap", "k_expensive", "diagonal"]);
    assert_eq!(rows.len(), 139);
    for row in &rows {
        let (a, upper, cheap, expensive) = (row[0].unwrap(), row[1].unwrap(), row[2].unwrap(), row[3].unwrap());
        assert!(expensive <= cheap && cheap <= upper, "a = {a}");
    }
    let text = fs::read_to_string(dir.path().join("r/regions.csv")).unwrap();
    let cell = text.lines().nth(1).unwrap().split(',').nth(1).unwrap();
    assert_eq!(cell.split('e').next().unwrap().replace(['.', '-'], "").len(), 17);
}

#[test]
fn regions_without_delay_have_no_upper_curve() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"T": 0}"#);
    run_ok(&["regions", "--config", &cfg, "--out", "r"], dir.path());
    let (_, rows) = read_csv(&dir.path().join("r/regions.csv"));
    // without delay both the stability bound and the cheap-control boundary are unbounded
    assert!(rows.iter().all(|r| r[1].is_none() && r[2].is_none() && r[3].is_some()));
    run_ok(&["regions", "--config", &cfg, "--out", "s", "--format", "svg"], dir.path());
    let svg = fs::read_to_string(dir.path().join("s/regions.svg")).unwrap();
    assert!(!svg.contains("k upper") && !svg.contains("cheap") && svg.contains("expensive"));
}

#[test]
fn scalar_sweep_curves_shrink_with_delay() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&["scalar-sweep", "--out", "s", "--format", "json"], dir.path());
    let report = read_json(&dir.path().join("s/scalar_sweep.json"));
    let curves = report["curves"].as_array().unwrap();
    let column = |i: usize, key: &str| -> Vec<f64> {
        curves[i][key].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect()
    };
    assert_eq!(column(0, "a").len(), 91);
    let a1 = column(1, "a");
    assert!(*a1.last().unwrap() < 1.0 && *a1.last().unwrap() > 0.9);
    let (k1, a3, k3) = (column(1, "k"), column(3, "a"), column(3, "k"));
    for (i, a) in a3.iter().enumerate() {
        assert_eq!(a1[i], *a);
        assert!(k3[i] <= k1[i], "a = {a}");
    }
}

#[test]
fn rd_kernels_delay_lowers_the_origin() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&["rd-kernels", "--out", "k"], dir.path());
    let (header, free) = read_csv(&dir.path().join("k/kernel_delay_free.csv"));
    assert_eq!(header, ["x", "K"]);
    let (_, delayed) = read_csv(&dir.path().join("k/kernel_delay.csv"));
    let mid = free.len() / 2;
    assert_eq!(free[mid][0], Some(0.0));
    assert!(delayed[mid][1].unwrap() < free[mid][1].unwrap());
    // flatter at the origin: smaller relative drop over one step
    let drop = |k: &[Vec<Option<f64>>]| 1.0 - k[mid + 1][1].unwrap() / k[mid][1].unwrap();
    assert!(drop(&delayed) < drop(&free));
    let meta = read_json(&dir.path().join("k/rd_kernels.meta.json"));
    assert_eq!(meta["kernels"].as_array().unwrap().len(), 5);
    assert!(meta["thresholds"]["x_th1"].as_f64().unwrap() > 0.0);
    assert_eq!(meta["truncation"].as_array().unwrap().len(), 2);
}

#[test]
fn rd_kernels_without_delay_emit_one_kernel() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"T": 0, "n_lambda": 801}"#);
    run_ok(&["rd-kernels", "--config", &cfg, "--out", "k"], dir.path());
    let files: Vec<_> = fs::read_dir(dir.path().join("k")).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(files.iter().filter(|f| f.to_string_lossy().ends_with(".csv")).count(), 1);
}

#[test]
fn rd_kernels_closed_form_gap_falls_with_weight() {
    let dir = tempfile::tempdir().unwrap();
    let mut gaps = Vec::new();
    for r in [10.0, 100.0] {
        let cfg = write_config(dir.path(), "c.json", &format!(r#"{{"d": 10, "r": {r}, "n_lambda": 1001}}"#));
        run_ok(&["rd-kernels", "--config", &cfg, "--out", "k", "--format", "json"], dir.path());
        gaps.push(read_json(&dir.path().join("k/rd_kernels.json"))["l2_gap"].as_f64().unwrap());
    }
    assert!(gaps[1] < gaps[0], "{gaps:?}");
}

#[test]
fn circulant_defaults_match_ring_anchors() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&["circulant", "--out", "c", "--format", "json"], dir.path());
    let report = read_json(&dir.path().join("c/circulant.json"));
    for run in report["runs"].as_array().unwrap() {
        let (t, r) = (run["input"]["T"].as_f64().unwrap(), run["input"]["r"].as_f64().unwrap());
        let out = &run["output"];
        assert_eq!(out["stable"], Value::Bool(true));
        let self_gain = out["self_gain"].as_f64().unwrap();
        if t == 0.01 {
            let want = if r == 1.0 { 2.8 } else { 2.3 };
            assert!((self_gain - want).abs() <= 0.1, "r = {r}: {self_gain}");
        }
    }
}

#[test]
fn circulant_single_request_interface() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"n": 2, "a_row": [-1.0, 0.5], "T": 0.1, "r": 1.0, "method": "numerical_opt"}"#);
    run_ok(&["circulant", "--config", &cfg, "--out", "c", "--format", "json"], dir.path());
    let report = read_json(&dir.path().join("c/circulant.json"));
    let mut keys: Vec<&str> = report.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(keys, ["cost", "k_modes", "k_row", "self_gain", "stable"]);
    assert_eq!(report["k_row"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_default_grid_passes() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&["verify", "--out", "v"], dir.path());
    let text = fs::read_to_string(dir.path().join("v/verify.csv")).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 120);
    assert!(rows.iter().all(|r| r[9] == "true"));
    let zero_gain: Vec<_> = rows.iter().filter(|r| r[2].parse::<f64>().unwrap() == 0.0).collect();
    assert!(!zero_gain.is_empty());
    for r in zero_gain {
        let (a, f): (f64, f64) = (r[0].parse().unwrap(), r[4].parse().unwrap());
        assert!((f + 0.5 / a).abs() <= 1e-9 * f);
    }
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let verify = write_config(dir.path(), "v.json", r#"{"a_values": [-1.0, 0.5], "T_values": [0.5], "k_per_pair": 3}"#);
    let rd = write_config(dir.path(), "k.json", r#"{"n_lambda": 801}"#);
    for (cmd, cfg) in [("regions", None), ("scalar-sweep", None), ("rd-kernels", Some(&rd)), ("circulant", None), ("verify", Some(&verify))] {
        for format in ["csv", "json", "svg"] {
            let args = [cmd, "--format", format, "--out"];
            let mut outputs = Vec::new();
            for name in ["first", "second"] {
                let mut a = args.to_vec();
                a.push(name);
                if let Some(c) = cfg {
                    a.extend(["--config", c.as_str()]);
                }
                run_ok(&a, dir.path());
                let mut files: Vec<_> = fs::read_dir(dir.path().join(name)).unwrap().map(|e| e.unwrap().path()).collect();
                files.sort();
                outputs.push(files.iter().map(|f| fs::read(f).unwrap()).collect::<Vec<_>>());
                fs::remove_dir_all(dir.path().join(name)).unwrap();
            }
            assert!(!outputs[0].is_empty());
            assert_eq!(outputs[0], outputs[1], "{cmd} {format}");
        }
    }
}

fn error_json(out: &Output) -> Value {
    serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).expect("stderr is one JSON object")
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("regions", r#"{"a_min": 1, "a_max": 0}"#),
        ("regions", r#"{"bogus": 1}"#),
        ("rd-kernels", r#"{"d": -1}"#),
        ("circulant", r#"{"n": 3, "a_row": [1, 2, 3], "T": 0.1, "r": 1, "method": "small_delay"}"#),
        ("verify", "not json"),
    ];
    for (cmd, body) in cases {
        let cfg = write_config(dir.path(), "bad.json", body);
        let out = delaykern(&[cmd, "--config", &cfg, "--out", "o"], dir.path());
        assert_eq!(out.status.code(), Some(2), "{cmd} {body}");
        let err = error_json(&out);
        assert_eq!(err["exit_code"], 2);
        assert!(err["message"].as_str().unwrap().len() > 5);
    }
    let out = delaykern(&["nonsense"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_json(&out)["error"], "usage");
    let out = delaykern(&["regions", "--config", "missing.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numerical_failures_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"n": 2, "a_row": [5.0, 1.0], "T": 0.5, "r": 1, "method": "numerical_opt"}"#);
    let out = delaykern(&["circulant", "--config", &cfg, "--out", "o"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let err = error_json(&out);
    assert_eq!(err["error"], "unstabilizable");
    assert!(err["message"].as_str().unwrap().contains("mode 0"));
}

#[test]
fn flags_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_delaykern"))
        .current_dir(dir.path())
        .env("DELAYKERN_COMMAND", "circulant")
        .env("DELAYKERN_FORMAT", "svg")
        .env("DELAYKERN_OUT", "from_env")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("from_env/circulant_0.svg").exists());
}
