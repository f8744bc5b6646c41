//! End-to-end runs of the `nnls` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn run(dir: &Path, config: &str, args: &[&str]) -> Output {
    let cfg = dir.join("run.toml");
    fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_nnls")).args(args).arg("--config").arg(&cfg).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn out_file(dir: &Path, name: &str) -> PathBuf {
    dir.join("out").join(name)
}

fn box_config(h: f64, sigma: i64) -> String {
    format!(
        "[profile]\nkind = \"box\"\nsigma = {sigma}\nh_re = {h}\nwidth = 1.0\n\n[kgrid]\nk_max = 12.0\nnodes = 801\n\n[rays]\nxi = [-2.0, -0.5, 0.0, 0.25, 1.0, 3.0]\n"
    )
}

#[test]
fn scatter_box_reports_passing_gates() {
    let d = TempDir::new().unwrap();
    let o = run(d.path(), &box_config(0.5, 1), &["scatter"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("gates: pass"));
    let csv = fs::read_to_string(out_file(d.path(), "spectral.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("# config_sha256="));
    assert_eq!(lines.next(), Some("k,re_a1,im_a1,re_a2,im_a2,re_b,im_b"));
    assert_eq!(lines.count(), 801);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(out_file(d.path(), "spectral.json")).unwrap()).unwrap();
    assert_eq!(json["config_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn zero_profile_gives_identity_data() {
    let d = TempDir::new().unwrap();
    let o = run(d.path(), "[profile]\nkind = \"zero\"\nsigma = -1\n[kgrid]\nk_max = 5.0\nnodes = 101\n", &["scatter"]);
    assert_eq!(code(&o), 0);
    let csv = fs::read_to_string(out_file(d.path(), "spectral.csv")).unwrap();
    for line in csv.lines().skip(2) {
        let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(&v[1..], &[1.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
    }
    let o = run(d.path(), "[profile]\nkind = \"zero\"\nsigma = 1\n[kgrid]\nk_max = 5.0\nnodes = 101\n[rays]\nxi = [0.5]\n", &["rays"]);
    assert_eq!(code(&o), 0);
    let rays = fs::read_to_string(out_file(d.path(), "rays.csv")).unwrap();
    assert_eq!(rays.lines().nth(2).unwrap(), "5e-1,0e0,0e0,0e0,0e0,1,1");
}

#[test]
fn malformed_sample_file_is_an_input_error() {
    let d = TempDir::new().unwrap();
    fs::write(d.path().join("q.csv"), "x,re_q,im_q\n-1,0,0\n0,abc,0\n1,0,0\n").unwrap();
    let o = run(d.path(), "[profile]\nkind = \"sampled\"\nsigma = 1\nsample_file = \"q.csv\"\n", &["scatter"]);
    assert_eq!(code(&o), 2);
    let o = run(d.path(), "[profile]\nkind = \"box\"\nsigma = 1\nh_re = 0.2\nsurprise = 1\n", &["scatter"]);
    assert_eq!(code(&o), 2);
    let o = run(d.path(), "[profile]\nkind = \"box\"\nsigma = 2\n", &["scatter"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn sampled_profile_round_trip() {
    let d = TempDir::new().unwrap();
    let mut text = String::from("# gaussian\nx,re_q,im_q\n");
    for i in 0..=400 {
        let x = -10.0 + 0.05 * i as f64;
        text += &format!("{x},{},0\n", 0.3 * (-x * x).exp());
    }
    fs::write(d.path().join("q.csv"), text).unwrap();
    let o = run(d.path(), "[profile]\nkind = \"sampled\"\nsigma = 1\nsample_file = \"q.csv\"\n[kgrid]\nk_max = 6.0\nnodes = 201\n", &["gates"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("gates: pass"));
}

#[test]
fn gate_failure_refuses_unless_overridden() {
    let d = TempDir::new().unwrap();
    let cfg = box_config(1.5, 1).replace("nodes = 801", "nodes = 2001");
    let o = run(d.path(), &cfg, &["rays"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!out_file(d.path(), "rays.csv").exists());
    let o = run(d.path(), &cfg, &["rays", "--override-gates"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out_file(d.path(), "rays.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().contains("gates overridden"));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(out_file(d.path(), "rays.json")).unwrap()).unwrap();
    assert_eq!(json["gates_overridden"], true);
}

#[test]
fn box_rays_track_arg_a1() {
    let d = TempDir::new().unwrap();
    let o = run(d.path(), &box_config(0.5, 1), &["rays"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out_file(d.path(), "rays.csv")).unwrap();
    for line in csv.lines().skip(2) {
        let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        let k = -v[0];
        // a1 = 1 - σ H² L² E², E = (e^{2ik} - 1)/(2ik)
        let (c, s) = ((2.0 * k).cos(), (2.0 * k).sin());
        let (er, ei) = if k == 0.0 { (1.0, 0.0) } else { (s / (2.0 * k), (1.0 - c) / (2.0 * k)) };
        let (a1r, a1i) = (1.0 - 0.25 * (er * er - ei * ei), -0.25 * 2.0 * er * ei);
        assert!((v[2] - a1i.atan2(a1r) / (2.0 * std::f64::consts::PI)).abs() < 1e-8, "{line}");
    }
    let pred = fs::read_to_string(out_file(d.path(), "predictions.csv")).unwrap();
    assert_eq!(pred.lines().nth(1), Some("x,t,xi,re_q,im_q,abs_q,remainder_class,remainder_scale"));
}

#[test]
fn reruns_are_byte_identical() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let cfg = box_config(0.3, -1) + "[model]\nrandom_sets = 2\n[run]\nseed = 7\n";
    for cmd in ["scatter", "rays", "model-verify"] {
        assert_eq!(code(&run(a.path(), &cfg, &[cmd, "--threads", "2"])), 0);
        assert_eq!(code(&run(b.path(), &cfg, &[cmd, "--threads", "2"])), 0);
    }
    for f in ["spectral.csv", "rays.csv", "predictions.csv", "model.csv"] {
        assert_eq!(fs::read(out_file(a.path(), f)).unwrap(), fs::read(out_file(b.path(), f)).unwrap(), "{f}");
    }
}

#[test]
fn model_verify_residuals_are_small() {
    let d = TempDir::new().unwrap();
    let o = run(d.path(), &(box_config(0.3, 1) + "[model]\nrandom_sets = 3\n"), &["model-verify"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(out_file(d.path(), "model.json")).unwrap()).unwrap();
    let models = json["models"].as_array().unwrap();
    assert_eq!(models.len(), 9);
    for m in models {
        let r = &m["report"];
        assert!(r["ode_residual"].as_f64().unwrap() <= 1e-6);
        assert!(r["jump_residual"].as_f64().unwrap() <= 1e-8);
    }
}

#[test]
fn evolve_writes_snapshots_and_manifest() {
    let d = TempDir::new().unwrap();
    let cfg = "[profile]\nkind = \"box\"\nsigma = 1\nh_re = 0.2\n[evolution]\ndt = 0.002\nt_final = 0.2\nhalf_width = 128.0\nnodes = 1024\nsmooth_initial = true\nsnapshot_every = 0.1\n";
    let o = run(d.path(), cfg, &["evolve"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(out_file(d.path(), "manifest.json")).unwrap()).unwrap();
    assert_eq!(m["snapshots"].as_array().unwrap().len(), 3);
    let snap = fs::read_to_string(out_file(d.path(), "snapshot_00002.csv")).unwrap();
    assert_eq!(snap.lines().count(), 1026);
    let small_cell = cfg.replace("half_width = 128.0\nnodes = 1024", "half_width = 8.0\nnodes = 256");
    assert_eq!(code(&run(d.path(), &small_cell, &["evolve"])), 4);
    let too_coarse_in_time = cfg.replace("half_width = 128.0", "half_width = 4.0");
    assert_eq!(code(&run(d.path(), &too_coarse_in_time, &["evolve"])), 2);
}

#[test]
fn compare_gaussian_slope() {
    let d = TempDir::new().unwrap();
    let mut text = String::from("x,re_q,im_q\n");
    for i in 0..=400 {
        let x = -10.0 + 0.05 * i as f64;
        text += &format!("{x},{},0\n", 0.3 * (-x * x).exp());
    }
    fs::write(d.path().join("q.csv"), text).unwrap();
    let cfg = "[profile]\nkind = \"sampled\"\nsigma = 1\nsample_file = \"q.csv\"\n[kgrid]\nk_max = 12.0\nnodes = 1001\n[rays]\nxi = [0.25]\n[evolution]\ndt = 0.01\nt_final = 16.0\nhalf_width = 512.0\nnodes = 4096\nsnapshot_start = 6.0\nsnapshot_every = 1.0\n";
    let o = run(d.path(), cfg, &["compare"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(out_file(d.path(), "compare.json")).unwrap()).unwrap();
    let s = &json["summaries"][0];
    assert!((s["fitted_slope"].as_f64().unwrap() + 0.5).abs() <= 0.03, "{s}");
    let zero = "[profile]\nkind = \"zero\"\nsigma = 1\n[evolution]\nt_final = 2.0\n";
    let o = run(d.path(), zero, &["compare"]);
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read_to_string(out_file(d.path(), "compare.csv")).unwrap().lines().count(), 2);
}
