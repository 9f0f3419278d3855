//! End-to-end behavior of the binary: worked examples, structured
//! diagnostics, and exit codes.

use std::io::Write;
use std::process::{Command, Stdio};

fn run(args: &[&str], input: &str) -> (i32, String, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_k3period"))
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
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn reduce_tau_worked_example() {
    let (code, stdout, _) = run(&["reduce-tau"], r#"{"tau":{"re":"0","im":"1/2"}}"#);
    assert_eq!(code, 0);
    assert_eq!(
        stdout.trim(),
        r#"{"m":[[0,-1],[1,0]],"tau":{"re":"0","im":"2"},"rho":"2"}"#
    );
}

#[test]
fn lcs_test_worked_example() {
    let (code, stdout, _) = run(
        &["lcs-test"],
        r#"{"tau":{"re":"0","im":"1"},"u_tilde":{"re":"0","im":"2"}}"#,
    );
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(stdout.trim()).unwrap();
    assert_eq!(doc["is_lcs"], serde_json::json!(true));
    assert_eq!(doc["rho"], serde_json::json!("1"));
    assert_eq!(doc["binding"], serde_json::json!("TWO_OVER_SQRT3"));
}

#[test]
fn ade_type_fixture_both_frames() {
    let (code, stdout, _) = run(&["ade-type"], r#"{"tau":{"re":"0","im":"1"}}"#);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(stdout.trim()).unwrap();
    let comps = doc["components"].as_array().unwrap();
    assert_eq!(comps.len(), 2);
    for c in comps {
        assert_eq!(c["label"], serde_json::json!("E8"));
        assert_eq!(c["kodaira"][0], serde_json::json!("II*"));
    }

    let (code, stdout, _) = run(
        &["ade-type", "--frame", "d16plus"],
        r#"{"tau":{"re":"0","im":"1"}}"#,
    );
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(stdout.trim()).unwrap();
    assert_eq!(doc["components"][0]["label"], serde_json::json!("D16"));
}

#[test]
fn classify_v_standard_plane() {
    let y1 = r#"{"a":[0,0],"b":[1,0],"c":[0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0]}"#;
    let y2 = r#"{"a":[0,0],"b":[0,1],"c":[0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0]}"#;
    let record = format!(r#"{{"v":[{y1},{y2}]}}"#);
    let (code, stdout, _) = run(&["classify-v"], &record);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), r#"{"class":"e8e8"}"#);

    let (code, stdout, _) = run(&["classify-v", "--frame", "d16plus"], &record);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), r#"{"class":"d16plus"}"#);
}

#[test]
fn act_rotation_element() {
    let g = r#""g":{"m":[[0,-1],[1,0]],"Q":[[0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0],[0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0]],"R":[[0,0],[0,0]],"f":[[1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0],[0,1,0,0,0,0,0,0,0,0,0,0,0,0,0,0],[0,0,1,0,0,0,0,0,0,0,0,0,0,0,0,0],[0,0,0,1,0,0,0,0,0,0,0,0,0,0,0,0],[0,0,0,0,1,0,0,0,0,0,0,0,0,0,0,0],[0,0,0,0,0,1,0,0,0,0,0,0,0,0,0,0],[0,0,0,0,0,0,1,0,0,0,0,0,0,0,0,0],[0,0,0,0,0,0,0,1,0,0,0,0,0,0,0,0],[0,0,0,0,0,0,0,0,1,0,0,0,0,0,0,0],[0,0,0,0,0,0,0,0,0,1,0,0,0,0,0,0],[0,0,0,0,0,0,0,0,0,0,1,0,0,0,0,0],[0,0,0,0,0,0,0,0,0,0,0,1,0,0,0,0],[0,0,0,0,0,0,0,0,0,0,0,0,1,0,0,0],[0,0,0,0,0,0,0,0,0,0,0,0,0,1,0,0],[0,0,0,0,0,0,0,0,0,0,0,0,0,0,1,0],[0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,1]]}"#;
    let record = format!(
        r#"{{{g},"narain":{{"tau":{{"re":"0","im":"2"}},"u_tilde":{{"re":"0","im":"2"}}}}}}"#
    );
    let (code, stdout, _) = run(&["act"], &record);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(stdout.trim()).unwrap();
    assert_eq!(doc["narain"]["tau"]["im"], serde_json::json!("1/2"));
    assert_eq!(doc["narain"]["u_tilde"]["im"], serde_json::json!("2"));
}

#[test]
fn act_with_general_matrix() {
    // Identity 20x20 fixes the point; a non-isometry is rejected.
    let id: Vec<Vec<i64>> = (0..20)
        .map(|i| (0..20).map(|j| i64::from(i == j)).collect())
        .collect();
    let point = r#""narain":{"tau":{"re":"0","im":"1"},"u_tilde":{"re":"1/3","im":"2"}}"#;
    let record = format!(
        r#"{{"matrix":{},{point}}}"#,
        serde_json::to_string(&id).unwrap()
    );
    let (code, stdout, _) = run(&["act"], &record);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(stdout.trim()).unwrap();
    assert_eq!(doc["narain"]["u_tilde"]["re"], serde_json::json!("1/3"));

    let mut bad = id.clone();
    bad[0][0] = 2;
    let record = format!(
        r#"{{"matrix":{},{point}}}"#,
        serde_json::to_string(&bad).unwrap()
    );
    let (code, stdout, _) = run(&["act"], &record);
    assert_eq!(code, 2);
    let doc: serde_json::Value = serde_json::from_str(stdout.trim()).unwrap();
    assert_eq!(doc["error"]["kind"], serde_json::json!("gram-preservation"));
}

#[test]
fn frame_env_override() {
    let record = r#"{"tau":{"re":"0","im":"1"}}"#;
    let mut child = Command::new(env!("CARGO_BIN_EXE_k3period"))
        .args(["ade-type"])
        .env("K3PERIOD_FRAME", "d16plus")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(record.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(String::from_utf8(out.stdout).unwrap().trim()).unwrap();
    assert_eq!(doc["components"][0]["label"], serde_json::json!("D16"));
}

#[test]
fn wrong_component_gets_conjugation_hint() {
    // The conjugate of a valid period: Im tau < 0.
    let record = r#"{"omega":{"a":[{"re":"0","im":"-1"},"1"],"b":[{"re":"0","im":"-1"},"1"],"c":["0","0","0","0","0","0","0","0","0","0","0","0","0","0","0","0"]}}"#;
    let (code, stdout, _) = run(&["coords"], record);
    assert_eq!(code, 2);
    let doc: serde_json::Value = serde_json::from_str(stdout.trim()).unwrap();
    assert_eq!(doc["error"]["kind"], serde_json::json!("wrong-component"));
    assert!(doc["error"]["detail"]
        .as_str()
        .unwrap()
        .contains("conjugate"));
}

#[test]
fn malformed_input_reports_line() {
    let input = "{\"tau\":{\"re\":\"0\",\"im\":\"1\"}}\nnot json\n";
    let (code, stdout, _) = run(&["reduce-tau"], input);
    assert_eq!(code, 2);
    let lines: Vec<&str> = stdout.trim().lines().collect();
    assert_eq!(lines.len(), 2);
    let doc: serde_json::Value = serde_json::from_str(lines[1]).unwrap();
    assert_eq!(doc["error"]["kind"], serde_json::json!("parse-error"));
    assert_eq!(doc["error"]["line"], serde_json::json!(2));
}

#[test]
fn shear_constraint_violation_is_named() {
    // r11 must equal -(c1,c1)/2; a zeroed R with nonzero Q violates it.
    let mut q1 = vec![0i64; 16];
    q1[0] = 1;
    let g = serde_json::json!({
        "m": [[1, 0], [0, 1]],
        "Q": [q1, vec![0i64; 16]],
        "R": [[0, 0], [0, 0]],
        "f": (0..16).map(|i| (0..16).map(|j| i64::from(i == j)).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    let record = format!(
        r#"{{"g":{g},"narain":{{"tau":{{"re":"0","im":"1"}},"u_tilde":{{"re":"0","im":"2"}}}}}}"#
    );
    let (code, stdout, _) = run(&["act"], &record);
    assert_eq!(code, 2);
    let doc: serde_json::Value = serde_json::from_str(stdout.trim()).unwrap();
    assert_eq!(doc["error"]["kind"], serde_json::json!("shear-constraint"));
}

#[test]
fn fiber_scan_and_text_format() {
    let record = r#"{"tau":{"re":"0","im":"1"},"u_tilde_samples":[{"re":"0","im":"2"},{"re":"0","im":"3"},{"re":"0","im":"5/2"}]}"#;
    let (code, stdout, _) = run(
        &["fiber-scan", "--box-bound", "1", "--c-norm-bound", "2"],
        record,
    );
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(stdout.trim()).unwrap();
    assert_eq!(doc["complete"], serde_json::json!(true));
    assert_eq!(doc["samples_checked"], serde_json::json!(3));

    let (code, stdout, _) = run(
        &["lcs-test", "--format", "text"],
        r#"{"tau":{"re":"0","im":"1"},"u_tilde":{"re":"0","im":"2"}}"#,
    );
    assert_eq!(code, 0);
    assert!(stdout.contains("is_lcs=true"));
}

#[test]
fn ambiguous_records_are_rejected() {
    // coords wants exactly one chart.
    let record = r#"{"tube":{"tau":{"re":"0","im":"1"},"u":{"re":"0","im":"1"}},"narain":{"tau":{"re":"0","im":"1"},"u_tilde":{"re":"0","im":"1"}}}"#;
    let (code, stdout, _) = run(&["coords"], record);
    assert_eq!(code, 2);
    let doc: serde_json::Value = serde_json::from_str(stdout.trim()).unwrap();
    assert_eq!(doc["error"]["kind"], serde_json::json!("invalid-input"));

    // act wants exactly one of g/matrix.
    let record = r#"{"narain":{"tau":{"re":"0","im":"1"},"u_tilde":{"re":"0","im":"1"}}}"#;
    let (code, stdout, _) = run(&["act"], record);
    assert_eq!(code, 2);
    let doc: serde_json::Value = serde_json::from_str(stdout.trim()).unwrap();
    assert_eq!(doc["error"]["kind"], serde_json::json!("invalid-input"));
}

#[test]
fn valid_records_after_invalid_still_emit() {
    let input = "bad\n{\"tau\":{\"re\":\"0\",\"im\":\"1\"}}\n";
    let (code, stdout, _) = run(&["reduce-tau"], input);
    assert_eq!(code, 2);
    let lines: Vec<&str> = stdout.trim().lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].contains("parse-error"));
    assert!(lines[1].contains("\"rho\":\"1\""));
}

#[test]
fn file_input_matches_stdin() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("records.jsonl");
    let record = r#"{"tau":{"re":"1/2","im":"1/2"}}"#;
    std::fs::write(&path, format!("{record}\n")).unwrap();
    let (code_f, out_f, _) = run(&["reduce-tau", "--input", path.to_str().unwrap()], "");
    let (code_s, out_s, _) = run(&["reduce-tau"], record);
    assert_eq!(code_f, 0);
    assert_eq!(code_f, code_s);
    assert_eq!(out_f, out_s);
}
