use std::collections::BTreeSet;
use std::process::{Command, Output};

fn powops(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_powops"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

/// Signed terms of a rendered sum, so that term order does not matter.
fn signed_terms(s: &str) -> BTreeSet<String> {
    let normalized = s.trim().replace(" - ", " + -");
    normalized
        .split(" + ")
        .map(|t| t.replace("- ", "-").trim().to_string())
        .collect()
}

#[test]
fn normal_form_of_q1_q0() {
    let o = powops(&["nf", "Q1 Q0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(signed_terms(&stdout(&o)), signed_terms("2 Q2 Q1 - 2 Q0 Q2"));
}

#[test]
fn normal_form_of_a_scalar() {
    let o = powops(&["nf", "a"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "a");
}

#[test]
fn strategies_agree() {
    let reference = stdout(&powops(&["nf", "Q2 Q0 Q1 Q1"]));
    for s in ["rightmost", "random:1", "random:99"] {
        assert_eq!(
            stdout(&powops(&["nf", "Q2 Q0 Q1 Q1", "--strategy", s])),
            reference,
            "{s}"
        );
    }
}

#[test]
fn tor_of_omega_is_two_torsion() {
    let o = powops(&["tor", "--k", "1", "--field", "z"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("Tor_0 = 0"), "{text}");
    assert!(text.contains("Tor_1 = Z/2"), "{text}");
    assert!(text.contains("Tor_2 = 0"), "{text}");
}

#[test]
fn action_on_the_parameter() {
    assert_eq!(stdout(&powops(&["act", "Q1", "--on", "a"])).trim(), "3");
}

#[test]
fn norm_of_a() {
    let o = powops(&["norm", "--op", "N", "--ring", "R", "a"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(signed_terms(&stdout(&o)), signed_terms("-a^3 + 54"));
}

#[test]
fn isogeny_parameter() {
    let o = powops(&["isogeny", "--order", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("a' = (a^2) + (3) d + (-a) d^2"));
}

#[test]
fn json_output_parses() {
    let o = powops(&["--json", "nf", "Q1 Q0"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).expect("valid JSON");
    assert_eq!(v["input"], "Q1 Q0");
    assert!(v["terms"]["terms"].as_array().is_some_and(|t| t.len() == 2));
}

#[test]
fn malformed_input_exits_with_2() {
    assert_eq!(powops(&["nf", "Q7"]).status.code(), Some(2));
    assert_eq!(powops(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        powops(&["tor", "--k", "2", "--field", "z"]).status.code(),
        Some(2)
    );
    assert_eq!(
        powops(&["theta", "x", "--window", "nonsense"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn non_unit_logarithm_is_an_input_error() {
    let o = powops(&["ell", "--ring", "S", "a"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a unit"));
}

#[test]
fn exit_status_reflects_failed_assertions() {
    let o = powops(&["verify-all"]);
    let lines: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(lines.len(), 12);
    let failed = lines.iter().any(|l| l.starts_with("FAIL"));
    assert_eq!(o.status.code(), Some(if failed { 1 } else { 0 }));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["theta", "x y"][..],
        &["--json", "derive", "--what", "qseries"][..],
    ] {
        assert_eq!(powops(args).stdout, powops(args).stdout);
    }
}
