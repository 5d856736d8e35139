use std::process::{Command, Output};

fn prodrec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prodrec")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let o = prodrec(&a);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn coefficients(v: &serde_json::Value) -> Vec<String> {
    v["relation"]["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap().to_string())
        .collect()
}

#[test]
fn derive_text_and_json() {
    let o = prodrec(&["derive", "--p", "1", "--q", "-1", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("X(m) = 2X(m-1) + 2X(m-2) - X(m-3)"));
    assert!(text.contains("[1, -2, -2, 1]"));

    assert_eq!(coefficients(&json(&["derive", "--coeffs", "1,1", "--n", "1"])), ["1", "-1", "-1"]);
    let v = json(&["derive", "--p", "2", "--q", "4", "--n", "3"]);
    assert_eq!(coefficients(&v), ["1", "0", "0", "512"]);
    assert_eq!(v["relation"]["order"], 3);
    assert_eq!(v["k"], 2);
    assert_eq!(v["rank"], 1);
    assert_eq!(v["nullity"], 2);
    assert_eq!(v["checks"]["annihilates_u_power"], true);
}

#[test]
fn rational_flags() {
    let v = json(&["derive", "--p", "1/2", "--q", "-3/4", "--n", "2"]);
    assert_eq!(v["checks"]["annihilates_u_power"], true);
    assert!(coefficients(&v).iter().all(|c| !c.contains('.')));
}

#[test]
fn json_output_is_byte_stable() {
    let args = ["identities", "--p", "2", "--q", "3", "--max-n", "4", "--format", "json"];
    assert_eq!(prodrec(&args).stdout, prodrec(&args).stdout);
    let args = ["oracle", "--p", "3", "--q", "2", "--n", "4", "--format", "json"];
    assert_eq!(prodrec(&args).stdout, prodrec(&args).stdout);
}

#[test]
fn named_commands() {
    assert_eq!(coefficients(&json(&["jarden", "--p", "1", "--q", "-1", "--n", "3"])), ["1", "-3", "-6", "3", "1"]);

    let v = json(&["identities", "--p", "1", "--q", "-1", "--max-n", "5"]);
    for row in v["residuals"]["discriminant"].as_array().unwrap() {
        assert_eq!(row["value"], "0");
    }
    assert!(v["checks"].as_object().unwrap().values().all(|b| b == true));

    let v = json(&["oracle", "--p", "1", "--q", "-1", "--n", "2", "--appendix", "all"]);
    let checks = v["checks"].as_object().unwrap();
    for key in ["A3", "A7", "B", "C", "D3", "cor36", "shift"] {
        assert_eq!(checks[key], true, "{key}");
    }

    let v = json(&["charpoly", "--p", "1", "--q", "-1", "--v", "2"]);
    assert_eq!(v["polynomials"]["galois"]["coefficients"], serde_json::json!(["1", "-1", "-1"]));
    assert_eq!(v["polynomials"]["galois_reversed"]["display"], "x^2 - x - 1");
}

#[test]
fn verify_reports_failure_point() {
    let v = json(&[
        "verify", "--coeffs", "2,-4", "--init", "0,1", "--relation", "1,-8,0,-512,4096", "--range", "4..30",
        "--power", "3",
    ]);
    assert_eq!(v["status"], "mismatch");
    assert_eq!(v["values"]["first_failure_m"], "4");
    assert_eq!(v["values"]["first_failure_residual"], "-1024");
}

#[test]
fn exit_codes() {
    let o = prodrec(&["derive", "--p", "one", "--q", "1", "--n", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    assert_eq!(prodrec(&["derive", "--p", "1", "--q", "1"]).status.code(), Some(2));

    let o = prodrec(&["jarden", "--p", "2", "--q", "4", "--n", "3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("u_3 = 0"));
    assert_eq!(prodrec(&["oracle", "--p", "1", "--q", "1", "--n", "3"]).status.code(), Some(3));
    assert_eq!(prodrec(&["charpoly", "--p", "1", "--q", "0", "--v", "2"]).status.code(), Some(3));
}
