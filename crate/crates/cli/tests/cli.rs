use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kzfox")).args(args).output().expect("binary runs")
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("stdout is JSON lines"))
        .collect()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn associator_degree_zero_is_one() {
    let out = run(&["associator", "--degree", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = lines(&out);
    assert_eq!(v[0]["terms"].as_array().unwrap().len(), 1);
    assert_eq!(v[0]["terms"][0]["word"], serde_json::json!([]));
    assert_eq!(v[0]["terms"][0]["re"], 1.0);
}

#[test]
fn associator_writes_series_and_zeta_report() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("phi.json");
    let out = run(&["associator", "--degree", "3", "--accuracy", "1e-8", "--out", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let series: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(series["degree"], 3);
    let report = &lines(&out)[0];
    assert_eq!(report["pass"], true);
    for z in report["zeta"].as_array().unwrap() {
        assert!(z["rel_err"].as_f64().unwrap() < 1e-5, "{z}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "poisson", "--loops", &data("loop_around_2.json"), &data("loop_around_base.json"), "--seed", "4"];
    let a = run(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_kzfox"))
        .args(args)
        .env("KZFOX_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn algebra_suite_passes() {
    let out = run(&["verify", "algebra", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(lines(&out).iter().all(|l| l["pass"] == true));
}

#[test]
fn coaction_and_pentagon_on_figure_eight() {
    for which in ["coaction", "pentagon"] {
        let out = run(&["verify", which, "--path", &data("fig8.json"), "--degree", "3"]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        assert!(lines(&out)[0]["discrepancy"].as_f64().unwrap() <= 1e-5);
    }
}

#[test]
fn poisson_reports_three_tables() {
    let out = run(&[
        "verify", "poisson", "--loops", &data("loop_around_2.json"), &data("loop_around_base.json"),
        "--N", "2", "--radius", "0.1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = &lines(&out)[0];
    for key in ["lhs_oracle", "rhs_formula", "vdb"] {
        assert_eq!(r[key]["values"].as_array().unwrap().len(), 16);
    }
}

#[test]
fn goldman_bracket_passes_and_cobracket_is_reported() {
    let out = run(&["verify", "goldman", "--loops", &data("loop_around_2.json"), &data("loop_around_base.json")]);
    let r = &lines(&out)[0];
    assert!(r["bracket"]["discrepancy"].as_f64().unwrap() <= 1e-5);
    let cob_ok = r["cobracket"].as_array().unwrap().iter().all(|c| c["discrepancy"].as_f64().unwrap() <= 1e-5);
    assert_eq!(out.status.code(), Some(if cob_ok { 0 } else { 2 }));
}

#[test]
fn malformed_path_names_the_field() {
    let out = run(&["verify", "coaction", "--path", &data("bad_puncture.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("start.puncture"), "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_one() {
    let out = run(&["verify", "coaction", "--accuracy", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--accuracy"));
    let out = run(&["verify", "coaction", "--degree", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(run(&["verify", "bogus"]).status.code(), Some(1));
    let out = Command::new(env!("CARGO_BIN_EXE_kzfox"))
        .args(["verify", "algebra"])
        .env("KZFOX_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("KZFOX_THREADS"));
}

#[test]
fn unreachable_accuracy_exits_two() {
    let out = run(&["verify", "coaction", "--path", &data("fig8.json"), "--accuracy", "1e-30"]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn punctures_flag_replaces_configuration() {
    let out = run(&["verify", "coaction", "--punctures", "0,0;0,1", "--degree", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(lines(&out)[0]["path"]["punctures"][1], serde_json::json!([0.0, 1.0]));
    let out = run(&["verify", "coaction", "--punctures", "0,0;1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--punctures[2]"));
}
