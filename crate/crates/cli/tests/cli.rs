//! End-to-end tests of the rotovort binary: config validation and exit
//! codes, record emission, sweep continuation past bad points, and output
//! piping.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rotovort"))
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("rotovort-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

#[test]
fn bad_config_exits_2_with_suggestion() {
    let cfg = write_temp("bad.json", r#"{"gas": {"epsilonn": 0.1}}"#);
    let out = run(&["tf2d", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("did you mean \"epsilon\""), "{err}");
    std::fs::remove_file(cfg).ok();
}

#[test]
fn config_errors_are_all_reported() {
    let cfg = write_temp(
        "multi.json",
        r#"{"gas": {"epsilon": -1.0, "omega": -2.0}, "grid": {"n_r": 4}}"#,
    );
    let out = run(&["tf2d", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.matches("- ").count() >= 3, "{err}");
    std::fs::remove_file(cfg).ok();
}

#[test]
fn tf2d_emits_csv_with_flags_only() {
    let out = run(&["tf2d", "--epsilon", "0.1", "--omega", "10"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("epsilon,omega,mu,energy"));
    let row = lines.next().unwrap();
    let mu: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert!((mu - (200.0 / std::f64::consts::PI - 12.5)).abs() < 1e-9);
}

#[test]
fn scatter_square_barrier_matches_closed_form() {
    let cfg = write_temp(
        "scatter.json",
        r#"{
            "pair_potential": {"kind": "square_barrier", "height": 8.0, "range": 1.0},
            "scatter": {"r_max": 12.0, "steps": 20000},
            "microscopic": {"scattering_length": 0.0, "particle_count": 1000.0, "trap_scale": 1.0}
        }"#,
    );
    // note: microscopic.scattering_length is ignored by scatter (it derives
    // from the computed a), but a zero value must be rejected by validation
    let out = run(&["scatter", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_file(cfg).ok();

    let cfg = write_temp(
        "scatter2.json",
        r#"{
            "pair_potential": {"kind": "square_barrier", "height": 8.0, "range": 1.0},
            "scatter": {"r_max": 12.0, "steps": 20000}
        }"#,
    );
    let out = run(&["scatter", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let a: f64 = text.lines().nth(1).unwrap().split(',').next().unwrap().parse().unwrap();
    assert!((a - (1.0 - 2.0_f64.tanh() / 2.0)).abs() < 1e-8, "a = {a}");
    std::fs::remove_file(cfg).ok();
}

#[test]
fn gp_runs_on_a_small_grid_and_dumps_artifacts() {
    let cfg = write_temp(
        "gp.json",
        r#"{
            "gas": {"epsilon": 0.15, "omega": 2.0},
            "grid": {"n_r": 32, "n_theta": 64},
            "solver": {"tol": 1e-8, "max_iters": 4000, "init": "constant"}
        }"#,
    );
    let out_dir = std::env::temp_dir().join(format!("rotovort-gp-{}", std::process::id()));
    let out = run(&[
        "gp",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for artifact in ["results.csv", "field.csv", "census.json"] {
        assert!(out_dir.join(artifact).exists(), "missing {artifact}");
    }
    let field = std::fs::read_to_string(out_dir.join("field.csv")).unwrap();
    assert!(field.starts_with("r,theta,re_psi,im_psi,density\n"));
    assert_eq!(field.lines().count(), 1 + 32 * 64);
    std::fs::remove_file(cfg).ok();
    std::fs::remove_dir_all(out_dir).ok();
}

#[test]
fn sweep_single_point_matches_direct_run() {
    let cfg = write_temp(
        "sweep1.json",
        r#"{
            "gas": {"epsilon": 0.1, "omega": 10.0},
            "sweep": {"epsilon": [0.1], "omega": [10.0], "command": "tf2d"}
        }"#,
    );
    let sweep_out = run(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(sweep_out.status.code(), Some(0));
    let direct_out = run(&["tf2d", "--epsilon", "0.1", "--omega", "10"]);
    let sweep_text = String::from_utf8(sweep_out.stdout).unwrap();
    let direct_text = String::from_utf8(direct_out.stdout).unwrap();

    let parse = |text: &str| -> Vec<(String, String)> {
        let mut lines = text.lines();
        let header: Vec<&str> = lines.next().unwrap().split(',').collect();
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        header
            .iter()
            .zip(row)
            .map(|(h, v)| (h.to_string(), v.to_string()))
            .collect()
    };
    let sweep_fields = parse(&sweep_text);
    let direct_fields = parse(&direct_text);
    for (key, value) in &direct_fields {
        let in_sweep = sweep_fields.iter().find(|(k, _)| k == key);
        assert_eq!(
            in_sweep.map(|(_, v)| v.as_str()),
            Some(value.as_str()),
            "field {key} differs between sweep and direct run"
        );
    }
    std::fs::remove_file(cfg).ok();
}

#[test]
fn sweep_continues_past_bad_points_and_exits_3() {
    // omega = 0 is invalid for the giant-vortex trial: that column errors,
    // the other six points succeed, and the sweep still completes.
    let cfg = write_temp(
        "sweep_bad.json",
        r#"{
            "grid": {"n_r": 32, "n_theta": 64},
            "sweep": {"epsilon": [0.1, 0.15, 0.2], "omega": [5.0, 0.0, 10.0], "command": "giant"}
        }"#,
    );
    let out = run(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 9);
    let errors = rows.iter().filter(|r| r.starts_with("error,")).count();
    let oks = rows.iter().filter(|r| r.starts_with("ok,")).count();
    assert_eq!((oks, errors), (6, 3), "{text}");
    std::fs::remove_file(cfg).ok();
}

#[test]
fn check_battery_passes() {
    let out = run(&["check"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() >= 6);
    assert!(text.lines().all(|l| l.starts_with("PASS")), "{text}");
}

#[test]
fn json_format_emits_canonical_keys() {
    let out = run(&["asympt", "--epsilon", "0.01", "--omega", "20", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let obj = v.as_array().unwrap()[0].as_object().unwrap();
    let keys: Vec<&String> = obj.keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted, "keys not canonical: {keys:?}");
    assert_eq!(obj["regime"], "lattice_b");
}

#[test]
fn unwritable_output_exits_4() {
    let blocker = write_temp("blocker", "not a directory");
    let out_dir = blocker.join("sub");
    let out = run(&[
        "tf2d",
        "--epsilon",
        "0.1",
        "--omega",
        "0",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
    std::fs::remove_file(blocker).ok();
}
