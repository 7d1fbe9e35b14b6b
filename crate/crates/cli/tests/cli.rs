use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::tempdir;

fn stepwave(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stepwave"))
        .args(args)
        .env_remove("STEPWAVE_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn csv_column(path: &Path, column: &str) -> Vec<f64> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == column).unwrap();
    lines
        .map(|l| l.split(',').nth(idx).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn field_output_is_byte_identical_across_runs() {
    let (a, b) = (tempdir().unwrap(), tempdir().unwrap());
    for dir in [&a, &b] {
        let out = stepwave(&[
            "field",
            "--out",
            dir.path().to_str().unwrap(),
            "--t",
            "1,4",
            "--nx",
            "51",
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    for name in [
        "field_space_t1.csv",
        "field_space_t4.csv",
        "field_manifest.json",
    ] {
        let x = fs::read(a.path().join(name)).unwrap();
        let y = fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name}");
    }
    let text = fs::read_to_string(a.path().join("field_space_t1.csv")).unwrap();
    assert!(text.starts_with("x,t,re_psi,im_psi,density,stationary_density\n"));
    assert_eq!(text.lines().count(), 52);
    assert!(!text.contains('\r'));
}

#[test]
fn time_cut_and_config_file() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "# time cut\naxis = time\nx = 2.5\nnt = 11\nt_max = 5\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = stepwave(&[
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "field",
        "--nt",
        "21",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let t = csv_column(&out_dir.join("field_time_x2.5.csv"), "t");
    assert_eq!(t.len(), 21);
    assert_eq!(*t.last().unwrap(), 5.0);
    let m = read_json(&out_dir.join("field_manifest.json"));
    let tau = m["files"][0]["markers"]["tau"].as_f64().unwrap();
    let t_m = m["files"][0]["markers"]["t_m"].as_f64().unwrap();
    assert!((tau / t_m - 3f64.sqrt()).abs() < 1e-12);
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    for args in [
        vec!["field", "--out", d, "--nx", "1"],
        vec!["field", "--out", d, "--colour", "red"],
        vec!["field", "--out", d, "--axis", "diagonal"],
        vec!["field", "--out", d, "--x_min", "5", "--x_max", "1"],
        vec!["field", "--out", d, "--model", "pulse", "--E0", "2"],
        vec!["--units", "cgs", "field"],
        vec!["reproduce", "8", "--out", d],
        vec!["oracle", "--out", d, "--n_steps", "ten"],
    ] {
        let out = stepwave(&args);
        assert_eq!(
            code(&out),
            1,
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let cfg = dir.path().join("dup.cfg");
    fs::write(&cfg, "nx = 3\nnx = 4\n").unwrap();
    let out = stepwave(&["--config", cfg.to_str().unwrap(), "field", "--out", d]);
    assert_eq!(code(&out), 1);
}

#[test]
fn io_errors_exit_three() {
    let dir = tempdir().unwrap();
    let missing = dir.path().join("missing.cfg");
    let out = stepwave(&["--config", missing.to_str().unwrap(), "field"]);
    assert_eq!(code(&out), 3);
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = stepwave(&["field", "--out", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("sub"));
}

#[test]
fn out_dir_from_environment() {
    let dir = tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_stepwave"))
        .args(["field", "--nx", "3"])
        .env("STEPWAVE_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(dir.path().join("field_space_t1.csv").exists());
}

#[test]
fn oracle_zero_source_and_defaults_pass() {
    let dir = tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = stepwave(&["oracle", "--out", d, "--source_amplitude", "0"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let path = dir.path().join("oracle.csv");
    for col in ["analytic_density", "cn_density", "talbot_density"] {
        assert!(csv_column(&path, col).iter().all(|v| *v == 0.0), "{col}");
    }

    let out = stepwave(&["oracle", "--out", d, "--V0", "0", "--E0", "1"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(csv_column(&path, "rel_err_cn").iter().all(|v| *v <= 1e-3));
    let summary = read_json(&dir.path().join("oracle_summary.json"));
    assert_eq!(summary["pass"], true);
}

#[test]
fn oracle_violations_exit_two() {
    let dir = tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = stepwave(&[
        "oracle",
        "--out",
        d,
        "--tolerance_cn",
        "1e-9",
        "--talbot_stride",
        "8",
    ]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("violation"));
    let summary = read_json(&dir.path().join("oracle_summary.json"));
    assert_eq!(summary["pass"], false);
    assert!(summary["violating_rows"].as_u64().unwrap() > 0);

    let out = stepwave(&["oracle", "--out", d, "--n_steps", "2000000"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("preflight"));
}

#[test]
fn forerunner_report_contents() {
    let dir = tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = stepwave(&["forerunner", "--out", d]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = read_json(&dir.path().join("forerunner.json"));
    let ratio = r["height_ratio"].as_f64().unwrap();
    assert!((ratio - 3.0 * 3f64.sqrt() / 4.0).abs() < 1e-12);
    let xf_xm = r["x_f_over_x_m"].as_f64().unwrap();
    assert!((xf_xm - 3f64.sqrt()).abs() < 1e-12);
    assert!((xf_xm - 84.246 / 48.639).abs() < 1e-4);
    let unit_eta: Vec<&Value> = r["scaling"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["eta"] == 1.0)
        .collect();
    assert_eq!(unit_eta.len(), 2);
    assert!(unit_eta.iter().all(|e| e["max_residual"] == 0.0));
    assert!(r["numeric"].is_object());
    assert!(r["relative_discrepancy"]["t_m"].as_f64().unwrap() < 0.03);

    assert_eq!(
        code(&stepwave(&["forerunner", "--out", d, "--format", "csv"])),
        1
    );
    assert_eq!(code(&stepwave(&["forerunner", "--out", d, "--E0", "2"])), 1);
}

#[test]
fn reproduce_manifest_lists_every_file() {
    let dir = tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = stepwave(&["reproduce", "--out", d, "--points", "101"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let m = read_json(&dir.path().join("manifest.json"));
    let listed: Vec<String> = m["files"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["file"].as_str().unwrap().to_owned())
        .collect();
    let mut on_disk: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n != "manifest.json")
        .collect();
    on_disk.sort();
    let mut sorted = listed.clone();
    sorted.sort();
    assert_eq!(sorted, on_disk);
    for e in m["files"].as_array().unwrap() {
        assert!(e["provenance"].is_string());
        assert!(e["figure"].is_u64());
    }
    for x in ["1.2", "1.5", "6", "10"] {
        assert!(listed
            .iter()
            .any(|f| f.starts_with("fig2") && f.ends_with(&format!("_x{x}.csv"))));
    }
    for t in ["100", "150", "300"] {
        assert!(listed.contains(&format!("fig5b_rescaled_t{t}.csv")));
    }
    for model in ["exact", "decomposition", "pulse"] {
        assert!(listed.contains(&format!("fig6a_time_x8_{model}.csv")));
        assert!(listed.contains(&format!("fig6b_space_t30_{model}.csv")));
    }
    let notes = m["files"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["consistency_note"].is_string())
        .count();
    assert!(notes >= 2);
}

#[test]
fn reproduce_single_figure_is_deterministic() {
    let (a, b) = (tempdir().unwrap(), tempdir().unwrap());
    for dir in [&a, &b] {
        let out = stepwave(&[
            "reproduce",
            "5",
            "--out",
            dir.path().to_str().unwrap(),
            "--points",
            "201",
        ]);
        assert_eq!(code(&out), 0);
    }
    for entry in fs::read_dir(a.path()).unwrap() {
        let name = entry.unwrap().file_name();
        assert_eq!(
            fs::read(a.path().join(&name)).unwrap(),
            fs::read(b.path().join(&name)).unwrap()
        );
    }
    // The rescaled overlays sit on the t0 curve.
    let base = csv_column(&a.path().join("fig5b_scaling_form.csv"), "eta_density");
    let peak = base.iter().cloned().fold(0.0, f64::max);
    let over = csv_column(&a.path().join("fig5b_rescaled_t300.csv"), "eta_density");
    let n = base.len();
    for i in n / 2..n {
        assert!((over[i] - base[i]).abs() <= 0.05 * peak, "{i}");
    }
}

#[test]
fn reproduce_fig1_markers_and_fig4_check() {
    let dir = tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(
        code(&stepwave(&[
            "reproduce",
            "1",
            "--out",
            d,
            "--points",
            "101"
        ])),
        0
    );
    let m = read_json(&dir.path().join("manifest.json"));
    let first = &m["files"][0];
    let v = first["scenario"]["group_velocity"].as_f64().unwrap();
    assert!((v - 0.593_096_958_474_575_3).abs() < 1e-12);
    assert!((first["markers"]["x_sc"].as_f64().unwrap() - 15.0 * v).abs() < 1e-12);

    assert_eq!(
        code(&stepwave(&[
            "reproduce",
            "4",
            "--out",
            d,
            "--points",
            "201"
        ])),
        0
    );
    let m = read_json(&dir.path().join("manifest.json"));
    let check = m["files"]
        .as_array()
        .unwrap()
        .iter()
        .find_map(|e| e.get("check"))
        .unwrap();
    assert_eq!(check["pass"], true);
    assert!(check["value"].as_f64().unwrap() <= 0.01);
}
