use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn weilcount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weilcount"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = weilcount(&all);
    let code = out.status.code().expect("exit code");
    let doc = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (doc, code)
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("weilcount-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn volume_exact() {
    let (doc, code) = json(&["volume", "2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["volume"]["num"], "32");
    assert_eq!(doc["result"]["volume"]["den"], "3");
    let (doc, _) = json(&["volume", "1"]);
    assert_eq!(doc["result"]["volume"]["num"], "4");
    assert_eq!(doc["result"]["volume"]["den"], "1");
    let human = String::from_utf8(weilcount(&["volume", "2"]).stdout).unwrap();
    assert!(human.contains("32/3 ≈ 10.6667"), "{human}");
}

#[test]
fn volume_monte_carlo_is_seeded() {
    let (a, _) = json(&["--seed", "5", "volume", "3", "--mc", "20000"]);
    let (b, _) = json(&["--seed", "5", "volume", "3", "--mc", "20000"]);
    assert_eq!(a["result"]["mc"], b["result"]["mc"]);
    assert_eq!(a["verdicts"]["mc_within_3_sigma"], "holds");
}

#[test]
fn count_dimension_one() {
    let (doc, code) = json(&["count", "2", "1"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["ordinary"], "2");
    assert_eq!(doc["result"]["lambda"], "5");
}

#[test]
fn count_report_holds() {
    let (doc, code) = json(&["count", "4", "2", "--report"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["ordinary"], "44");
    for (k, v) in doc["verdicts"].as_object().unwrap() {
        assert_eq!(v, "holds", "{k}");
    }
}

#[test]
fn count_divisor() {
    let (doc, code) = json(&["count", "8", "2", "--divisor", "4"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["divisor"]["count"], "67");
    let (_, code) = json(&["count", "8", "2", "--divisor", "3"]);
    assert_eq!(code, 2);
}

#[test]
fn batch_csv() {
    let out = weilcount(&["--format", "csv", "count", "--batch", "2", "5", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "q,n,ordinary,lambda,lambda_p,lambda_s");
    assert_eq!(lines[1], "2,2,16,35,19,19");
    assert_eq!(lines.len(), 5);
}

#[test]
fn non_prime_power_is_usage_error() {
    assert_eq!(weilcount(&["count", "6", "2"]).status.code(), Some(2));
    assert_eq!(weilcount(&["order", "10", "2", "100"]).status.code(), Some(2));
}

#[test]
fn order_example() {
    let (doc, code) = json(&["order", "4", "2", "17"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["a"], serde_json::json!([-1, 5]));
    assert_eq!(doc["result"]["f_at_1"], "17");
    assert_eq!(doc["verdicts"]["verified"], "holds");
}

#[test]
fn order_refusal_reports_interval() {
    let (doc, code) = json(&["order", "4", "2", "20"]);
    assert_eq!(code, 3);
    assert_eq!(doc["error"]["kind"], "domain");
    assert_eq!(doc["error"]["detail"]["admissible_interval"]["lo"], "15");
    assert_eq!(doc["error"]["detail"]["admissible_interval"]["hi"], "19");
}

#[test]
fn order_small_q() {
    let (doc, code) = json(&["order", "2", "2", "5"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["f_at_1"], "5");
    assert_eq!(doc["verdicts"]["verified"], "holds");
}

#[test]
fn check_classifies() {
    let (doc, _) = json(&["check", "--q", "2", "--", "-1"]);
    assert_eq!(doc["result"]["weil"], true);
    assert_eq!(doc["result"]["ordinary"], true);
    let (doc, _) = json(&["check", "--q", "4", "--", "5"]);
    assert_eq!(doc["result"]["weil"], false);
    assert_eq!(doc["result"]["ordinary"], Value::Null);
    let (doc, _) = json(&["check", "--q", "2", "--", "0"]);
    assert_eq!(doc["result"]["weil"], true);
    assert_eq!(doc["result"]["ordinary"], false);
    assert_eq!(doc["result"]["newton_polygon"]["vertices"].as_array().unwrap().len(), 2);
}

#[test]
fn json_round_trips() {
    let out = weilcount(&["--format", "json", "count", "3", "2"]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let again = serde_json::to_string(&doc).unwrap();
    assert_eq!(serde_json::from_str::<Value>(&again).unwrap(), doc);
    for key in ["command", "params", "result", "verdicts", "meta"] {
        assert!(doc.get(key).is_some(), "{key}");
    }
}

#[test]
fn cache_hit_on_second_run() {
    let dir = scratch_dir("cache");
    let d = dir.to_str().unwrap();
    let (first, _) = json(&["--cache-dir", d, "count", "5", "2"]);
    let (second, _) = json(&["--cache-dir", d, "count", "5", "2"]);
    assert_eq!(first["meta"]["cache_hit"], false);
    assert_eq!(second["meta"]["cache_hit"], true);
    assert_eq!(first["result"], second["result"]);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn budget_exhaustion() {
    let (doc, code) = json(&["--budget", "10", "count", "9", "3"]);
    assert_eq!(code, 4);
    assert_eq!(doc["error"]["kind"], "budget");
}

#[test]
fn thread_count_does_not_change_results() {
    let (one, _) = json(&["--threads", "1", "count", "8", "3"]);
    let (four, _) = json(&["--threads", "4", "count", "8", "3"]);
    assert_eq!(one["result"], four["result"]);
    let (one, _) = json(&["--threads", "1", "volume", "3", "--mc", "5000"]);
    let (four, _) = json(&["--threads", "4", "volume", "3", "--mc", "5000"]);
    assert_eq!(one["result"], four["result"]);
}

#[test]
fn verify_bounds_passes() {
    let (doc, code) = json(&["verify-bounds", "--samples", "500"]);
    assert_eq!(code, 0);
    for (k, v) in doc["verdicts"].as_object().unwrap() {
        assert_eq!(v, "holds", "{k}");
    }
}
