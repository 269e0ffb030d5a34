//! End-to-end checks of the command-line binary: each subcommand's files,
//! exit codes, and determinism, driven through the compiled executable.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn spgd_cmd() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spgd"))
}

fn run_ok(args: &[&str]) -> Output {
    let out = spgd_cmd().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "`spgd {}` failed:\n{}",
        args.join(" "),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn run_err(args: &[&str]) -> Output {
    let out = spgd_cmd().args(args).output().expect("binary runs");
    assert!(
        !out.status.success(),
        "`spgd {}` unexpectedly succeeded",
        args.join(" ")
    );
    out
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn eval_prints_exact_function_values() {
    let out = run_ok(&["bench", "eval", "--function", "peaks", "--at", "0,0"]);
    assert_eq!(stdout(&out).trim(), "0.9810118431238463");

    let out = run_ok(&[
        "bench",
        "eval",
        "--function",
        "easom",
        "--at",
        "69.33,12.23",
    ]);
    assert_eq!(stdout(&out).trim(), "-0");

    // 1D function takes a single coordinate, negative values included.
    let out = run_ok(&["bench", "eval", "--function", "quartic1d", "--at", "-1.5"]);
    assert_eq!(
        stdout(&out).trim().parse::<f64>().unwrap(),
        (-1.5f64).powi(4) - 3.0 * 2.25 - 1.5
    );
}

#[test]
fn eval_rejects_bad_input_with_nonzero_exit() {
    run_err(&["bench", "eval", "--function", "nosuch", "--at", "0,0"]);
    run_err(&["bench", "eval", "--function", "peaks", "--at", "0"]); // wrong arity
    run_err(&["bench", "eval", "--function", "peaks", "--at", "a,b"]);
}

#[test]
fn bench_run_writes_result_and_trace() {
    let dir = tempfile::tempdir().expect("tempdir");
    let trace_dir = dir.path().join("peaks");
    run_ok(&[
        "bench",
        "run",
        "--function",
        "peaks",
        "--algo",
        "spgd",
        "--preset",
        "reference",
        "--trace",
        trace_dir.to_str().unwrap(),
    ]);

    let result: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(trace_dir.join("result.json")).unwrap())
            .expect("result.json parses");
    let best_f = result["best_f"].as_f64().expect("best_f present");
    assert!(
        (best_f - -6.5511).abs() < 1e-3,
        "unexpected best_f {best_f}"
    );

    let trace = fs::read_to_string(trace_dir.join("trace.csv")).expect("trace.csv written");
    let mut lines = trace.lines();
    assert_eq!(lines.next(), Some("iter,event,f,grad_norm,x0,x1"));
    assert!(lines.next().unwrap().starts_with("0,init,"));
}

#[test]
fn bench_run_without_trace_prints_result_json() {
    let out = run_ok(&["bench", "run", "--function", "quartic1d", "--algo", "gd"]);
    let result: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("stdout is JSON");
    let best_f = result["best_f"].as_f64().unwrap();
    assert!(
        (best_f - -1.0702301817761541).abs() < 1e-9,
        "unexpected best_f {best_f}"
    );
}

#[test]
fn bench_run_rejects_unknown_preset() {
    run_err(&[
        "bench",
        "run",
        "--function",
        "peaks",
        "--algo",
        "spgd",
        "--preset",
        "nosuch",
    ]);
}

#[test]
fn robustness_writes_deterministic_reports() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cfg_path = dir.path().join("cfg.json");
    fs::write(
        &cfg_path,
        r#"{"function": "peaks", "algorithms": ["gd", "spgd"], "n_trials": 5, "master_seed": 27}"#,
    )
    .unwrap();

    let out1 = dir.path().join("report1");
    let out2 = dir.path().join("report2");
    for out in [&out1, &out2] {
        run_ok(&[
            "bench",
            "robustness",
            "--config",
            cfg_path.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
    }

    let r1 = fs::read(out1.join("report.json")).expect("report.json written");
    let r2 = fs::read(out2.join("report.json")).expect("report.json written");
    assert_eq!(
        r1, r2,
        "same config must produce byte-identical report.json"
    );

    let csv = fs::read_to_string(out1.join("report.csv")).expect("report.csv written");
    assert!(
        csv.starts_with("algorithm,converged_runs,"),
        "unexpected csv header: {csv}"
    );
    let report: serde_json::Value = serde_json::from_slice(&r1).unwrap();
    assert_eq!(report["n_trials"], 5);
    assert_eq!(report["master_seed"], 27);
}

#[test]
fn robustness_rejects_config_without_spgd() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cfg_path = dir.path().join("cfg.json");
    fs::write(
        &cfg_path,
        r#"{"function": "peaks", "algorithms": ["gd"], "n_trials": 5, "master_seed": 27}"#,
    )
    .unwrap();
    let out = run_err(&[
        "bench",
        "robustness",
        "--config",
        cfg_path.to_str().unwrap(),
        "--out",
        dir.path().join("report").to_str().unwrap(),
    ]);
    let stderr = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(
        stderr.contains("spgd"),
        "error should name the missing reference row: {stderr}"
    );
}

#[test]
fn robustness_writes_traces_when_asked() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cfg_path = dir.path().join("cfg.json");
    fs::write(
        &cfg_path,
        r#"{"function": "quartic1d", "algorithms": ["spgd"], "n_trials": 2, "master_seed": 3}"#,
    )
    .unwrap();
    let out_dir = dir.path().join("report");
    run_ok(&[
        "bench",
        "robustness",
        "--config",
        cfg_path.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--traces",
    ]);
    let traces: Vec<_> = fs::read_dir(out_dir.join("traces"))
        .expect("traces dir written")
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    assert_eq!(
        traces.len(),
        2,
        "one trace per (algorithm, trial): {traces:?}"
    );
    assert!(
        traces
            .iter()
            .all(|n| n.starts_with("spgd-trial") && n.ends_with(".trace.csv")),
        "unexpected trace names: {traces:?}"
    );
}

#[test]
fn pack_run_writes_history_and_final_scene() {
    let dir = tempfile::tempdir().expect("tempdir");
    let scenario_path = dir.path().join("tiny.json");
    fs::write(
        &scenario_path,
        r#"{
            "name": "tiny",
            "weights": {"w_b": 20.0, "w_c": 1e-3, "eps": 1e-5, "clearance_floor": 1e-12},
            "components": [
                {"name": "a", "cube": {"side": 0.5, "count": 8},
                 "pose": {"d": [0, 0, 0], "euler": [0.1, -0.15, 0.2]}},
                {"name": "b", "cube": {"side": 0.5, "count": 8},
                 "pose": {"d": [1.4, 0.05, -0.03], "euler": [-0.12, 0.08, -0.1]}}
            ],
            "config": {
                "alpha": 5e-8, "max_iter": 300, "patience": 300,
                "acceptance_factor": {"start_value": 1.2, "end_value": 1.0, "end_iter": 200},
                "amp_displacement": {"start_value": 0.3, "end_value": 0.05, "end_iter": 250},
                "amp_orientation": {"start_value": 0.5, "end_value": 0.1, "end_iter": 250},
                "perturb_interval": {"start_value": 20, "end_value": 50, "end_iter": 250},
                "n_p_per_variable": 2, "seed": 7
            }
        }"#,
    )
    .unwrap();

    for algo in ["spgd", "gd"] {
        let out_dir = dir.path().join(algo);
        run_ok(&[
            "pack",
            "run",
            "--scenario",
            scenario_path.to_str().unwrap(),
            "--algo",
            algo,
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert_history_csv(&out_dir.join("history.csv"));
        let scene: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(out_dir.join("final_scene.json")).unwrap())
                .expect("final_scene.json parses");
        assert_eq!(scene["components"].as_array().unwrap().len(), 2);
        assert_eq!(
            scene["components"][0]["spheres"].as_array().unwrap().len(),
            8
        );
        assert!(scene["volume"].as_f64().unwrap() > 0.0);
        assert!(scene["min_clearance"].is_number());
        assert!(scene["loss"].is_number());
    }
}

fn assert_history_csv(path: &Path) {
    let history = fs::read_to_string(path).expect("history.csv written");
    let mut lines = history.lines();
    assert_eq!(lines.next(), Some("iter,loss,volume,min_clearance,event"));
    let first = lines.next().expect("at least the init row");
    assert!(
        first.starts_with("0,") && first.ends_with(",init"),
        "bad init row: {first}"
    );
}

#[test]
fn pack_run_rejects_missing_scenario_file() {
    let out = run_err(&[
        "pack",
        "run",
        "--scenario",
        "/nonexistent.json",
        "--algo",
        "spgd",
        "--out",
        "/tmp/unused_pack_out",
    ]);
    let stderr = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(
        stderr.contains("nonexistent"),
        "error should name the file: {stderr}"
    );
}

#[test]
fn unknown_subcommands_and_flags_exit_nonzero() {
    run_err(&["bench", "nosuch"]);
    run_err(&["pack", "run", "--scenario"]); // missing value
    run_err(&[]);
}
