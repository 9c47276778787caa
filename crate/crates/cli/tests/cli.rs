use std::process::{Command, Output};

use serde_json::Value;

fn imago(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_imago"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", stdout(o)))
}

fn ratio(v: &Value) -> (String, String) {
    (
        v["num"].as_str().unwrap().to_string(),
        v["den"].as_str().unwrap().to_string(),
    )
}

#[test]
fn eval_square_on_gl2_4() {
    let o = imago(&["eval", "--word", "x1^2", "--group", "GL2(4)"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(ratio(&v["ratio"]), ("3".into(), "4".into()));
    assert_eq!(v["image_size"], "135");
    assert_eq!(v["order"], "180");
    assert_eq!(v["strategy"], "pruned");
    assert!((v["ratio_float"].as_f64().unwrap() - 0.75).abs() < 1e-12);
}

#[test]
fn eval_commutator_on_cyclic() {
    let o = imago(&["eval", "--word", "[x,y]", "--group", "C7"]);
    let v = json(&o);
    assert_eq!(ratio(&v["ratio"]), ("1".into(), "7".into()));
}

#[test]
fn eval_strategies_agree() {
    let a = json(&imago(&["eval", "--word", "[x1,x2]", "--group", "SL2(3)", "--strategy", "naive"]));
    let b = json(&imago(&["eval", "--word", "[x1,x2]", "--group", "SL2(3)", "--strategy", "pruned"]));
    assert_eq!(a["ratio"], b["ratio"]);
    assert_eq!(a["image_size"], b["image_size"]);
}

#[test]
fn eval_poly_on_ring() {
    let v = json(&imago(&["eval", "--poly", "x1^2", "--ring", "M2(2)"]));
    assert_eq!(ratio(&v["ratio"]), ("5".into(), "8".into()));
    assert_eq!(v["ring"], "M2(2)");
}

#[test]
fn eval_rejects_mixed_inputs() {
    let o = imago(&["eval", "--word", "x1", "--ring", "M2(2)"]);
    assert_eq!(o.status.code(), Some(2));
    let o = imago(&["eval", "--word", "x1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parse_errors_exit_2() {
    let o = imago(&["eval", "--word", "x1 *", "--group", "C2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position"));
    assert_eq!(imago(&["eval", "--word", "x1", "--group", "GL2(6)"]).status.code(), Some(2));
}

#[test]
fn caps_exit_3() {
    let o = imago(&["eval", "--word", "[x1,x2]", "--group", "GL2(64)"]);
    assert_eq!(o.status.code(), Some(3));
    let o = imago(&["--work-cap", "10", "eval", "--word", "[x1,x2]", "--group", "GL2(3)"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn plan_three_eighths() {
    let o = imago(&["plan", "--target", "3/8", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["group_spec"], "C2 x GL2(4)");
    assert_eq!(v["m"], 1);
    assert_eq!(v["exact"], true);
    assert_eq!(v["field_sizes"], serde_json::json!([2]));
    assert_eq!(ratio(&v["achieved"]), ("3".into(), "8".into()));
    assert_eq!(v["check"]["agrees"], true);
}

#[test]
fn plan_respects_epsilon() {
    let v = json(&imago(&["plan", "--target", "0.3", "--epsilon", "1/1000"]));
    assert_eq!(v["field_sizes"], serde_json::json!([2, 3, 4, 6, 7]));
    let (n, d) = ratio(&v["error"]);
    let err = n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap();
    assert!(err <= 1e-3);
}

#[test]
fn plan_with_larger_power() {
    let v = json(&imago(&["plan", "--target", "3/8", "--M", "4", "--check"]));
    assert_eq!(v["M"], "4");
    assert_eq!(v["check"]["agrees"], true);
}

#[test]
fn plan_bad_inputs_exit_2() {
    assert_eq!(imago(&["plan", "--target", "1.5"]).status.code(), Some(2));
    assert_eq!(imago(&["plan", "--target", "0"]).status.code(), Some(2));
    assert_eq!(imago(&["plan", "--target", "abc"]).status.code(), Some(2));
    assert_eq!(imago(&["plan", "--target", "1/3", "--M", "6"]).status.code(), Some(2));
    assert_eq!(imago(&["plan", "--target", "1/3", "--epsilon", "-1"]).status.code(), Some(2));
}

#[test]
fn classes_gl2_3() {
    let v = json(&imago(&["classes", "--q", "3"]));
    let rows = v["classes"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    let total: u64 = rows.iter().map(|r| r["size"].as_u64().unwrap()).sum();
    assert_eq!(total, 48);
    assert_eq!(v["total"], "48");
}

#[test]
fn classes_ring_scope_covers_all_matrices() {
    let v = json(&imago(&["classes", "--q", "2", "--ring"]));
    assert_eq!(v["total"], "16");
    assert_eq!(imago(&["classes", "--q", "6"]).status.code(), Some(2));
}

#[test]
fn scan_csv_records_errors_in_row() {
    let o = imago(&[
        "scan", "--word", "[x,y]", "--word", "x^2", "--group", "GL2(2)", "--group", "GL2(2048)",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "word,group,order,image_size,ratio,error");
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[1], "x1 * x2 * x1^-1 * x2^-1,GL2(2),6,3,1/2,");
    assert!(lines[2].starts_with("x1 * x2 * x1^-1 * x2^-1,GL2(2048),,,,"));
    assert!(lines[2].contains("cap"));
    assert_eq!(lines[3], "x1^2,GL2(2),6,3,1/2,");
}

#[test]
fn scan_json() {
    let v = json(&imago(&["--format", "json", "scan", "--word", "x^3", "--group", "C7"]));
    assert_eq!(v[0]["ratio"]["num"], "1");
    assert_eq!(v[0]["error"], Value::Null);
}

#[test]
fn verify_group_suite_has_no_failures() {
    let o = imago(&["verify", "--suite", "group"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.starts_with("STATUS"));
    assert!(out.contains("DISCREPANCY"));
    assert!(!out.lines().any(|l| l.starts_with("FAIL")));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn verify_ring_json() {
    let o = imago(&["--format", "json", "verify", "--suite", "ring"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let rows = v.as_array().unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r["suite"] == "ring"));
}

#[test]
fn output_is_deterministic_across_workers() {
    let a = imago(&["--workers", "1", "eval", "--word", "[x1,x2]", "--group", "GL2(5)"]);
    let b = imago(&["--workers", "4", "eval", "--word", "[x1,x2]", "--group", "GL2(5)"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn text_format() {
    let o = imago(&["--format", "text", "eval", "--word", "x^4", "--group", "GL2(3)"]);
    assert_eq!(stdout(&o), "x1^4 on GL2(3): 10 of 48 elements, ratio 5/24 (0.20833333333333334), strategy pruned\n");
}
