//! Black-box tests of the `sgal3` binary: JSON in/out, CSV outputs, and the
//! documented exit codes (0 ok, 1 selfcheck, 2 parse, 3 domain, 4 I/O,
//! 5 ordering).

use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sgal3"))
}

fn run_with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn as_f64_vec(v: &serde_json::Value) -> Vec<f64> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect()
}

#[test]
fn exp_of_zero_tangent_is_the_identity_record() {
    let out = run_with_stdin(&["exp"], r#"{"xi": [0,0,0,0,0,0,0,0,0,0]}"#);
    let json = stdout_json(&out);
    assert_eq!(json["format_version"], 1);
    assert_eq!(
        as_f64_vec(&json["C"]),
        vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]
    );
    assert_eq!(as_f64_vec(&json["v"]), vec![0.0; 3]);
    assert_eq!(as_f64_vec(&json["r"]), vec![0.0; 3]);
    assert_eq!(json["tau"].as_f64().unwrap(), 0.0);
}

#[test]
fn exp_of_a_pure_boost_with_time_picks_up_half_nu_iota() {
    let out = run_with_stdin(&["exp"], r#"{"xi": [0,0,0, 1,0,0, 0,0,0, 2]}"#);
    let json = stdout_json(&out);
    assert_eq!(as_f64_vec(&json["v"]), vec![1.0, 0.0, 0.0]);
    assert_eq!(as_f64_vec(&json["r"]), vec![1.0, 0.0, 0.0]);
    assert_eq!(json["tau"].as_f64().unwrap(), 2.0);
}

#[test]
fn exp_rejects_wrong_arity_with_exit_2() {
    let out = run_with_stdin(&["exp"], r#"{"xi": [0,0,0,0,0,0,0,0,0]}"#);
    assert_eq!(exit_code(&out), 2);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("xi") || stderr.contains("10"), "{stderr}");
}

#[test]
fn exp_rejects_transform_shaped_input_with_exit_2() {
    let out = run_with_stdin(
        &["exp"],
        r#"{"C": [1,0,0,0,1,0,0,0,1], "v": [0,0,0], "r": [0,0,0], "tau": 0}"#,
    );
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn log_of_identity_is_the_zero_tangent() {
    let out = run_with_stdin(
        &["log"],
        r#"{"C": [1,0,0,0,1,0,0,0,1], "v": [0,0,0], "r": [0,0,0], "tau": 0}"#,
    );
    let json = stdout_json(&out);
    assert_eq!(as_f64_vec(&json["xi"]), vec![0.0; 10]);
}

#[test]
fn log_inverts_exp_through_the_wire_format() {
    let xi = [0.3, -0.2, 0.1, 1.0, 0.5, -0.25, 0.2, 0.1, -0.3, 0.75];
    let input = format!("{{\"xi\": {xi:?}}}");
    let transform = run_with_stdin(&["exp"], &input);
    let json = String::from_utf8(transform.stdout.clone()).unwrap();
    let back = run_with_stdin(&["log"], &json);
    let round = stdout_json(&back);
    let got = as_f64_vec(&round["xi"]);
    for (a, b) in got.iter().zip(xi.iter()) {
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }
}

#[test]
fn log_of_a_pi_rotation_exits_3_with_a_diagnostic() {
    // rotation by pi about z
    let out = run_with_stdin(
        &["log"],
        r#"{"C": [-1,0,0,0,-1,0,0,0,1], "v": [0,0,0], "r": [0,0,0], "tau": 0}"#,
    );
    assert_eq!(exit_code(&out), 3);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("pi"), "{stderr}");
}

#[test]
fn log_rejects_a_non_rotation_block_with_exit_2() {
    let out = run_with_stdin(
        &["log"],
        r#"{"C": [2,0,0,0,1,0,0,0,1], "v": [0,0,0], "r": [0,0,0], "tau": 0}"#,
    );
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("'C'"));
}

#[test]
fn missing_input_file_exits_4() {
    let out = bin()
        .args(["exp", "/nonexistent/input.json"])
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 4);
}

fn read_column(cloud_csv: &Path, index: usize) -> Vec<String> {
    let text = std::fs::read_to_string(cloud_csv).unwrap();
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty() && !l.starts_with("x,"))
        .map(|l| l.split(',').nth(index).unwrap().to_string())
        .collect()
}

#[test]
fn banana_left_panel_holds_time_fixed_and_is_reproducible() {
    let dir = std::env::temp_dir().join(format!("sgal3_cli_left_{}", std::process::id()));
    let out_a = dir.join("a");
    let out_b = dir.join("b");
    for out in [&out_a, &out_b] {
        let run = bin()
            .args(["banana", "--panel", "left", "--out", out.to_str().unwrap()])
            .output()
            .unwrap();
        assert!(
            run.status.success(),
            "{}",
            String::from_utf8_lossy(&run.stderr)
        );
    }
    let cloud_a = std::fs::read(out_a.join("cloud.csv")).unwrap();
    let cloud_b = std::fs::read(out_b.join("cloud.csv")).unwrap();
    assert_eq!(
        cloud_a, cloud_b,
        "same config and seed must write identical files"
    );
    let ellipse_a = std::fs::read(out_a.join("ellipse3sigma.csv")).unwrap();
    let ellipse_b = std::fs::read(out_b.join("ellipse3sigma.csv")).unwrap();
    assert_eq!(ellipse_a, ellipse_b);

    let t_out = read_column(&out_a.join("cloud.csv"), 3);
    assert_eq!(t_out.len(), 1000);
    assert!(
        t_out.iter().all(|t| t == &t_out[0]),
        "left panel has no time noise, so t_out must be constant"
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn banana_accepts_a_config_file_and_overrides() {
    let dir = std::env::temp_dir().join(format!("sgal3_cli_cfg_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let config_path = dir.join("config.json");
    std::fs::write(
        &config_path,
        r#"{
            "format_version": 1,
            "mean": {"C": [1,0,0,0,1,0,0,0,1], "v": [2,0,0], "r": [0,0,0], "tau": 0},
            "covariance": {"0": 0.4},
            "event": {"x": [8,0,0], "t": 1},
            "n": 50,
            "seed": 3,
            "side": "right"
        }"#,
    )
    .unwrap();
    let out = dir.join("out");
    let run = bin()
        .args([
            "banana",
            "--config",
            config_path.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--n",
            "25",
            "--seed",
            "99",
        ])
        .output()
        .unwrap();
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let text = std::fs::read_to_string(out.join("cloud.csv")).unwrap();
    assert!(text.contains("# seed: 99"));
    assert!(text.contains("# n: 25"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn banana_rejects_bad_configs_with_exit_2() {
    let dir = std::env::temp_dir().join(format!("sgal3_cli_bad_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let config_path = dir.join("bad.json");
    std::fs::write(&config_path, r#"{"mean": "nope"}"#).unwrap();
    let run = bin()
        .args([
            "banana",
            "--config",
            config_path.to_str().unwrap(),
            "--out",
            dir.join("out").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(exit_code(&run), 2);
    // clap enforces exactly one of --panel/--config (its usage errors exit 2)
    let neither = bin()
        .args(["banana", "--out", dir.join("o2").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(exit_code(&neither), 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn preintegrate_two_row_constant_acceleration() {
    let dir = std::env::temp_dir().join(format!("sgal3_cli_imu_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let imu = dir.join("imu.csv");
    std::fs::write(&imu, "t,wx,wy,wz,ax,ay,az\n0,0,0,0,1,0,0\n1,0,0,0,1,0,0\n").unwrap();
    let out = bin()
        .args(["preintegrate", imu.to_str().unwrap()])
        .output()
        .unwrap();
    let json = stdout_json(&out);
    assert_eq!(as_f64_vec(&json["delta"]["v"]), vec![1.0, 0.0, 0.0]);
    assert_eq!(as_f64_vec(&json["delta"]["r"]), vec![0.5, 0.0, 0.0]);
    assert_eq!(json["delta"]["tau"].as_f64().unwrap(), 1.0);
    assert_eq!(json["total_time"].as_f64().unwrap(), 1.0);
    assert_eq!(json["sample_count"].as_i64().unwrap(), 1);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn preintegrate_rejects_empty_and_shuffled_logs() {
    let dir = std::env::temp_dir().join(format!("sgal3_cli_imu_bad_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let empty = dir.join("empty.csv");
    std::fs::write(&empty, "t,wx,wy,wz,ax,ay,az\n").unwrap();
    let out = bin()
        .args(["preintegrate", empty.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 2);

    let shuffled = dir.join("shuffled.csv");
    std::fs::write(
        &shuffled,
        "t,wx,wy,wz,ax,ay,az\n0,0,0,0,1,0,0\n2,0,0,0,1,0,0\n1,0,0,0,1,0,0\n",
    )
    .unwrap();
    let out = bin()
        .args(["preintegrate", shuffled.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 5);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn selfcheck_smoke() {
    let out = bin().arg("selfcheck").output().unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("[PASS]"));
    assert!(!stdout.contains("[FAIL]"));
}
