//! End-to-end tests driving the compiled binary.

use std::io::Write;
use std::process::{Command, Output};

fn curvlink(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvlink"))
        .args(args)
        .env_remove("CURVLINK_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_temp(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().expect("temp file");
    f.write_all(contents.as_bytes()).expect("write");
    f
}

const A882: &str = r#"{"generators":["a","b","c"],"relations":[
    {"pair":["a","b"],"m":8},{"pair":["b","c"],"m":8},{"pair":["a","c"],"m":2}]}"#;
const A772: &str = r#"{"generators":["a","b","c"],"relations":[
    {"pair":["a","b"],"m":7},{"pair":["b","c"],"m":7},{"pair":["a","c"],"m":2}]}"#;

#[test]
fn table1_csv_matches_published_rows() {
    let out = curvlink(&["table1", "--m", "3..13", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines[0], "m,theta_deg,cos_theta,cos_alpha,alpha_deg");
    assert_eq!(lines.len(), 12, "header plus 11 rows");
    assert_eq!(lines[1], "3,60.000,0.500,-0.143,98.213");
    assert_eq!(lines[2], "4,90.000,0.000,-0.333,109.471");
    assert!(lines[11].starts_with("13,152.308"));
}

#[test]
fn table1_json_and_determinism() {
    let run = || stdout(&curvlink(&["table1", "--m", "3,44", "--format", "json"]));
    let first = run();
    let doc: serde_json::Value = serde_json::from_str(&first).expect("valid json");
    assert_eq!(doc["command"], "table1");
    assert_eq!(doc["rows"][1]["m"], 44);
    let alpha = doc["rows"][1]["alpha_deg"].as_f64().unwrap();
    assert!((alpha - 171.839).abs() < 0.005);
    // byte-identical re-run
    assert_eq!(first, run());
}

#[test]
fn check_exit_codes() {
    let pass = write_temp(A882);
    let out = curvlink(&["check", "--input", pass.path().to_str().unwrap(), "--deltas", "auto"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("PASS"));

    let fail = write_temp(A772);
    let out = curvlink(&["check", "--input", fail.path().to_str().unwrap(), "--deltas", "auto"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("FAIL"));

    let out = curvlink(&["check", "--input", "/nonexistent.json", "--deltas", "auto"]);
    assert_eq!(out.status.code(), Some(2));

    let bad = write_temp(r#"{"generators":["a","a"]}"#);
    let out = curvlink(&["check", "--input", bad.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = curvlink(&["no-such-subcommand"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_json_reports_witness() {
    let fail = write_temp(A772);
    let out = curvlink(&[
        "check",
        "--input",
        fail.path().to_str().unwrap(),
        "--deltas",
        "auto",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["pass"], false);
    let systole = doc["systole_deg"].as_f64().unwrap();
    assert!((systole - 356.179).abs() < 0.01);
    assert_eq!(doc["witness"]["vertices"].as_array().unwrap().len(), 3);
}

#[test]
fn triples_check_agrees_with_check() {
    let fail = write_temp(A772);
    let out = curvlink(&[
        "triples-check",
        "--input",
        fail.path().to_str().unwrap(),
        "--deltas",
        "auto",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn explicit_delta_file() {
    let graph = write_temp(
        r#"{"generators":["a","b"],"relations":[{"pair":["a","b"],"m":5}]}"#,
    );
    let deltas = write_temp(r#"{"deltas_deg":{"a,b":59.55}}"#);
    let out = curvlink(&[
        "check",
        "--input",
        graph.path().to_str().unwrap(),
        "--deltas",
        deltas.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn tolerance_env_override() {
    let pass = write_temp(A882);
    // an absurd tolerance makes everything pass, including a failing graph
    let fail = write_temp(A772);
    let out = Command::new(env!("CARGO_BIN_EXE_curvlink"))
        .args(["check", "--input", fail.path().to_str().unwrap()])
        .env("CURVLINK_TOL", "1.0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    // and a bad value is an input error
    let out = Command::new(env!("CARGO_BIN_EXE_curvlink"))
        .args(["check", "--input", pass.path().to_str().unwrap()])
        .env("CURVLINK_TOL", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn enumerate_csv_thresholds() {
    let out = curvlink(&[
        "enumerate",
        "--family",
        "amn2",
        "--m-max",
        "60",
        "--n",
        "3..7",
        "--csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines[0], "n,minimal_m,required_alpha_deg,finite_type");
    let minimal: Vec<&str> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(minimal, vec!["44", "19", "12", "10", "8"]);

    let out = curvlink(&["enumerate", "--family", "nope", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn excluded_triples_csv() {
    let out = curvlink(&["excluded-triples", "--max", "8", "--csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.starts_with("7,7,2,")));
    assert!(text.lines().any(|l| l.starts_with("5,5,5,")));
    assert!(!text.lines().any(|l| l.starts_with("8,7,2,")));
}

#[test]
fn block_link_emits_graph_json() {
    let out = curvlink(&["block-link", "--m", "4", "--symmetric"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["vertices"].as_array().unwrap().len(), 4);
    assert_eq!(doc["edges"].as_array().unwrap().len(), 6);

    let out = curvlink(&["block-link", "--m", "2", "--labels", "a,c"]);
    assert!(out.status.success());

    let out = curvlink(&["block-link", "--m", "5"]);
    assert_eq!(out.status.code(), Some(2), "missing delta is an input error");
}

#[test]
fn diam_l_matches_closed_form() {
    let out = curvlink(&[
        "diam-l", "--rho-deg", "40", "--sigma-deg", "60", "--json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let measured = doc["diameter_deg"].as_f64().unwrap();
    let formula = doc["formula_deg"].as_f64().unwrap();
    assert!((measured - 280.0).abs() < 1e-6);
    assert!((formula - 280.0).abs() < 1e-9);

    let out = curvlink(&["diam-l", "--rho-deg", "120", "--sigma-deg", "80"]);
    assert_eq!(out.status.code(), Some(2), "rho + sigma >= 180 is invalid");
}

#[test]
fn solve_deltas_flows() {
    let t444 = write_temp(
        r#"{"generators":["a","b","c"],"relations":[
            {"pair":["a","b"],"m":4},{"pair":["b","c"],"m":4},{"pair":["a","c"],"m":4}]}"#,
    );
    let out = curvlink(&[
        "solve-deltas",
        "--input",
        t444.path().to_str().unwrap(),
        "--grid-deg",
        "1.0",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["feasible"], false);
    assert!(doc["slack_deg"].as_f64().unwrap() < 0.0);
    let env = &doc["envelopes"][0];
    assert!(env["max_sum_deg"].as_f64().unwrap() < 360.0);

    let single = write_temp(
        r#"{"generators":["a","b"],"relations":[{"pair":["a","b"],"m":6}]}"#,
    );
    let out = curvlink(&[
        "solve-deltas",
        "--input",
        single.path().to_str().unwrap(),
        "--grid-deg",
        "1.0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("feasible"));
}

#[test]
fn coxeter_order_flows() {
    let out = curvlink(&["coxeter-order", "--indices", "3,3,2", "--word", "abc", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["result"], "finite");
    assert_eq!(doc["order"], 4);
    assert_eq!(doc["abc_predicate_infinite"], false);

    let out = curvlink(&["coxeter-order", "--indices", "7,3,2", "--word", "abc", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["result"], "infinite");
    assert_eq!(doc["certificate"]["kind"], "spectral_radius");
    assert!(doc["spectral_radius"].as_f64().unwrap() > 1.0);

    // the squared word (image of the commutator-style element) is also infinite
    let out = curvlink(&["coxeter-order", "--indices", "3,3,3", "--word", "abcabc", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["result"], "infinite");

    let out = curvlink(&["coxeter-order", "--indices", "3,3", "--word", "abc"]);
    assert_eq!(out.status.code(), Some(2));
    let out = curvlink(&["coxeter-order", "--indices", "3,3,2", "--word", "abd"]);
    assert_eq!(out.status.code(), Some(2));
}
