use std::process::{Command, Output};

use serde_json::Value;

fn qmf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmf"))
        .args(args)
        .env_remove("QMF_DEFAULT_TERMS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    let text = stdout(out);
    let value: Value = serde_json::from_str(&text).expect("valid JSON");
    let mut again = serde_json::to_string_pretty(&value).unwrap();
    again.push('\n');
    assert_eq!(again, text, "re-serialization is byte-identical");
    assert!(!has_float(&value), "no floats in {text}");
    value
}

fn has_float(v: &Value) -> bool {
    match v {
        Value::Number(n) => n.is_f64(),
        Value::Array(xs) => xs.iter().any(has_float),
        Value::Object(m) => m.values().any(has_float),
        _ => false,
    }
}

fn strip_times(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("wall_time_us");
            m.values_mut().for_each(strip_times);
        }
        Value::Array(xs) => xs.iter_mut().for_each(strip_times),
        _ => {}
    }
}

#[test]
fn expand_prints_exponent_coefficient_pairs() {
    let out = qmf(&["expand", "--form", "DELTA_2A", "--terms", "5"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "1:1\n2:-8\n3:12\n4:64\n");
}

#[test]
fn expand_json() {
    let out = qmf(&["expand", "--form", "C", "--terms", "4", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["version"], 1);
    let values: Vec<&str> = v["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["value"].as_str().unwrap())
        .collect();
    assert_eq!(values, ["1", "24", "24", "96"]);
}

#[test]
fn expand_rationals_are_strings() {
    let out = qmf(&["expand", "--form", "j_inv_1728", "--terms", "3", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["coefficients"][0]["exponent"], 1);
    assert_eq!(v["coefficients"][0]["value"], "1728");
}

#[test]
fn unknown_form_is_a_usage_error() {
    let out = qmf(&["expand", "--form", "NOPE"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("NOPE"));
}

#[test]
fn missing_subcommand_is_a_usage_error() {
    assert_eq!(code(&qmf(&[])), 2);
    assert_eq!(code(&qmf(&["verify", "--k", "3", "--k-min", "3"])), 2);
}

#[test]
fn default_terms_come_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_qmf"))
        .args(["expand", "--form", "D"])
        .env("QMF_DEFAULT_TERMS", "4")
        .output()
        .unwrap();
    assert_eq!(stdout(&out), "1:1\n2:8\n3:28\n");
    let bad = Command::new(env!("CARGO_BIN_EXE_qmf"))
        .args(["expand", "--form", "D"])
        .env("QMF_DEFAULT_TERMS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&bad), 2);
}

#[test]
fn verification_needs_eight_terms() {
    assert_eq!(code(&qmf(&["verify", "--k", "3", "--terms", "7"])), 2);
    assert_eq!(code(&qmf(&["identities", "--terms", "7"])), 2);
    assert_eq!(code(&qmf(&["verify", "--k", "3", "--terms", "8"])), 0);
}

#[test]
fn verify_sweep_passes_in_order() {
    let out = qmf(&["verify", "--k-min", "3", "--k-max", "15", "--terms", "40", "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    let checks = v["checks"].as_array().unwrap();
    let ks: Vec<i64> = checks.iter().map(|c| c["k"].as_i64().unwrap()).collect();
    let mut sorted = ks.clone();
    sorted.sort();
    assert_eq!(ks, sorted);
    assert_eq!(*ks.first().unwrap(), 3);
    assert_eq!(*ks.last().unwrap(), 15);
    for c in checks {
        assert_eq!(c["pass"], true, "{c}");
        assert!(c["certified_below"].as_i64().unwrap() >= 40);
        assert!(c["first_failure"].is_null());
    }
    let names: Vec<&str> = checks
        .iter()
        .filter(|c| c["k"] == 15)
        .map(|c| c["check"].as_str().unwrap())
        .collect();
    assert_eq!(
        names,
        [
            "ode_residual",
            "sharp_prime_residual",
            "closed_form",
            "recurrence",
            "key_lemma",
            "order",
            "frobenius_reproduces",
            "quasimodular"
        ]
    );
}

#[test]
fn verify_is_independent_of_worker_count() {
    let run = |jobs: &str| {
        let out = qmf(&["verify", "--k-min", "3", "--k-max", "19", "--terms", "30", "--format", "json", "--jobs", jobs]);
        assert_eq!(code(&out), 0);
        let mut v = json(&out);
        strip_times(&mut v);
        v
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn verify_rejects_bad_ranges() {
    assert_eq!(code(&qmf(&["verify", "--k-min", "5", "--k-max", "11"])), 2);
    assert_eq!(code(&qmf(&["verify", "--k-min", "11", "--k-max", "7"])), 2);
    assert_eq!(code(&qmf(&["fk", "--k", "6"])), 2);
}

#[test]
fn identities_pass() {
    let out = qmf(&["identities", "--terms", "60"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).ends_with("13 of 13 checks passed\n"));
}

#[test]
fn fk_prints_the_expansion() {
    let out = qmf(&["fk", "--k", "7", "--terms", "8"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("\n2:-70\n3:-560\n"), "{text}");
}

#[test]
fn poly_prints_the_polynomial() {
    let out = qmf(&["poly", "--family", "P", "--n", "4"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "x^4 + 201x^2 + 4550\n");
    let q = qmf(&["poly", "--family", "Q", "--n", "3", "--format", "json"]);
    let v = json(&q);
    assert_eq!(v["polynomial"], "x^2 + 66");
    assert_eq!(v["coefficients"], serde_json::json!(["66", "0", "1"]));
    assert_eq!(code(&qmf(&["poly", "--family", "R", "--n", "1"])), 2);
}

#[test]
fn frobenius_obstruction_is_success() {
    let out = qmf(&["frobenius", "--family", "2A", "--k", "3", "--rho", "0", "--terms", "10", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["status"], "OBSTRUCTED");
    assert_eq!(v["resonance_events"][0]["step"], 1);
    assert_eq!(v["resonance_events"][0]["obstruction"], "12");
    assert!(v["coefficients"].is_null());
}

#[test]
fn frobenius_fractional_root_and_bad_root() {
    let out = qmf(&["frobenius", "--family", "2A", "--k", "6", "--terms", "8", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["rho"], "7/4");
    assert_eq!(v["status"], "CLEAN");
    assert_eq!(code(&qmf(&["frobenius", "--k", "6", "--rho", "1/2"])), 2);
    assert_eq!(code(&qmf(&["frobenius", "--k", "six"])), 2);
    assert_eq!(code(&qmf(&["frobenius", "--family", "SL3Z", "--k", "4"])), 2);
}

#[test]
fn frobenius_negative_weight() {
    let out = qmf(&["frobenius", "--k", "-5", "--rho", "-1", "--terms", "10"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("status: OBSTRUCTED"));
}

#[test]
fn decompose_f3() {
    let out = qmf(&["decompose", "--k", "3", "--ring", "QM", "--terms", "20", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["status"], "UNIQUE");
    assert_eq!(v["e2_degree"], 1);
    let coeffs: Vec<(&str, &str)> = v["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["monomial"].as_str().unwrap(), c["value"].as_str().unwrap()))
        .collect();
    assert_eq!(
        coeffs,
        [("E2^2", "0"), ("E2*C", "1/144"), ("C^2", "-1/144"), ("D", "4/3")]
    );
    let star = qmf(&["decompose", "--k", "3", "--ring", "STAR", "--terms", "20"]);
    assert_eq!(code(&star), 0);
    assert!(stdout(&star).contains("NOT_IN_SPAN"));
}

#[test]
fn decompose_catalog_form() {
    let out = qmf(&["decompose", "--form", "DELTA_2A", "--ring", "MOD", "--terms", "20"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "DELTA_2A in MOD_GAMMA02 at weight 8: UNIQUE\n1 * C^2*D\n-64 * D^2\n"
    );
}

#[test]
fn decompose_domain_errors() {
    assert_eq!(code(&qmf(&["decompose", "--form", "C", "--ring", "QM", "--weight", "3"])), 2);
    assert_eq!(code(&qmf(&["decompose", "--form", "C", "--ring", "XYZ"])), 2);
    assert_eq!(code(&qmf(&["decompose", "--k", "43", "--ring", "QM", "--terms", "20"])), 2);
    assert_eq!(code(&qmf(&["decompose", "--ring", "QM"])), 2);
}
