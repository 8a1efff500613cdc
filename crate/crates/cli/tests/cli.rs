use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn ellstab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ellstab")).args(args).output().expect("binary runs")
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("every line is JSON"))
        .collect()
}

fn summary(out: &Output) -> Value {
    lines(out).pop().expect("summary line")["summary"].clone()
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

#[test]
fn theta_verify_passes() {
    let out = ellstab(&["theta-verify", "--order", "10", "--w-denoms", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let s = summary(&out);
    assert_eq!(s["command"], "theta-verify");
    assert_eq!(s["failed"], 0);
    assert!(s["passed"].as_u64().unwrap() > 50);
}

#[test]
fn single_component_of_two_boxes() {
    let out = ellstab(&["component-enum", "--n", "2", "--b", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let all = lines(&out);
    assert_eq!(all.len(), 2);
    assert_eq!(all[0]["component"], serde_json::json!([1, 1]));
    assert_eq!(all[0]["diagrams"], serde_json::json!(["(2)", "(1,1)"]));
}

#[test]
fn framing_components() {
    let out = ellstab(&["component-enum", "--framing", "2", "--dims", "2", "--w", "0,1/2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(summary(&out)["passed"], 1);
    assert_eq!(lines(&out).len(), 5);

    let out = ellstab(&["framing-blocks", "--w", "0,1,1/2", "--framing", "2,1", "--dims", "1,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(lines(&out)[0]["blocks"], serde_json::json!([[1, 2], [3]]));
}

#[test]
fn floor_scan_exit_codes_by_form() {
    let ok = ellstab(&["diflem-scan", "--n-max", "5", "--b-max", "3"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = ellstab(&["diflem-scan", "--n-max", "5", "--b-max", "3", "--form", "literal"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(summary(&bad)["failed"].as_u64().unwrap() > 0);
}

#[test]
fn malformed_input_exits_two() {
    assert_eq!(ellstab(&["theta-verify", "--bogus"]).status.code(), Some(2));
    assert_eq!(ellstab(&["limit-apply", "--input", "/nonexistent.json", "--w", "1/2"]).status.code(), Some(2));
    assert_eq!(ellstab(&["framing-blocks", "--w", "1/0"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["theta-verify", "--order", "6", "--w-denoms", "3", "--seed", "7"];
    assert_eq!(ellstab(&args).stdout, ellstab(&args).stdout);
    let args = ["young-report", "--n", "5", "--b", "3", "--w", "2/3"];
    assert_eq!(ellstab(&args).stdout, ellstab(&args).stdout);
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.jsonl");
    let out = ellstab(&["component-enum", "--n", "3", "--b", "2", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().last().unwrap().contains("\"summary\""));
}

#[test]
fn limit_apply_on_fixture() {
    let input = fixture("hilbert_two.json");
    let out = ellstab(&["limit-apply", "--input", &input, "--w", "1/2"]);
    assert_eq!(out.status.code(), Some(0));
    let all = lines(&out);
    let limit = all.iter().find(|l| l["stage"] == "limit").unwrap();
    assert_eq!(limit["candidate"]["entries"][0]["row"], "(2)");
    assert_eq!(limit["h"]["signs"], serde_json::json!([1, -1]));

    let out = ellstab(&["limit-apply", "--input", &input, "--w", "1/2,1"]);
    assert_eq!(out.status.code(), Some(2));
}
