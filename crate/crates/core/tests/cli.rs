use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn cli(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_cayley-spectra"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    } else {
        drop(child.stdin.take());
    }
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

#[test]
fn transposition_class_of_s3() {
    let job = r#"{"v": "v1", "group": {"generators": ["(1 2)", "(1 2 3)"]},
                  "connection": {"representatives": [1]}, "command": "spectrum"}"#;
    let out = cli(&["spectrum"], Some(job));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let mut seen: Vec<(String, u64)> = v["results"][0]["instances"][0]["spectrum"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            (
                e["value"]["rational"].as_str().unwrap().to_owned(),
                e["multiplicity"].as_u64().unwrap(),
            )
        })
        .collect();
    seen.sort();
    assert_eq!(seen, [("-3".to_owned(), 1), ("0".to_owned(), 4), ("3".to_owned(), 1)]);
}

#[test]
fn pentagon_integrality() {
    let out = cli(
        &[
            "check-integrality",
            "--group",
            "cyclic(5)",
            "--connection",
            r#"{"elements":[1,4]}"#,
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let inst = &json(&out)["results"][0]["instances"][0];
    assert_eq!(inst["integral"], false);
    assert_eq!(inst["power_closed"], false);
    assert_eq!(inst["agree"], true);
}

#[test]
fn sweep_over_nonidentity_classes() {
    let out = cli(
        &["check-theorem1", "--group", "cyclic(4)", "--connection", "sweep"],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let inst = json(&out)["results"][0]["instances"].as_array().unwrap().clone();
    assert_eq!(inst.len(), 8);
    assert!(inst.iter().all(|i| i["agree"] == true));
}

#[test]
fn theorem2_and_classes_with_gamma() {
    let out = cli(
        &[
            "check-theorem2",
            "--group",
            "cyclic(5)",
            "--connection",
            "[1,4]",
            "--gamma",
            r#"{"generators":[4]}"#,
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["results"][0]["gamma"], serde_json::json!([1, 4]));
    let inst = &v["results"][0]["instances"][0];
    assert_eq!(inst["in_field"], true);
    assert_eq!(inst["union_of_gamma_classes"], true);

    let out = cli(&["classes", "--group", "cyclic(5)", "--gamma", "rational"], None);
    let v = json(&out);
    assert_eq!(v["results"][0]["gamma_classes"], serde_json::json!([[0], [1, 2, 3, 4]]));
}

#[test]
fn table_output_has_exact_and_approximate_values() {
    let out = cli(
        &[
            "spectrum",
            "--group",
            "cyclic(5)",
            "--connection",
            r#"{"elements":[1,4]}"#,
            "--output",
            "table",
        ],
        None,
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("η^2 + η^3"), "{text}");
    assert!(text.contains("-1.618034"), "{text}");
    assert!(text.contains("0.618034"), "{text}");
    assert!(!text.contains("-0.000000"), "{text}");
    assert!(text.ends_with("OK\n"));
}

#[test]
fn exit_codes() {
    let bad_field = |args: &[&str], field: &str| {
        let out = cli(args, None);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let msg = String::from_utf8_lossy(&out.stderr);
        assert!(msg.contains(&format!("`{field}`")), "{msg}");
    };
    bad_field(&["spectrum", "--group", "cyclic(5)"], "connection");
    bad_field(&["spectrum", "--group", "cyclic(0)", "--connection", "[1]"], "group");
    bad_field(
        &["spectrum", "--group", "cyclic(5)", "--connection", "[9]"],
        "connection",
    );
    bad_field(
        &[
            "spectrum",
            "--group",
            "cyclic(5)",
            "--connection",
            "[1]",
            "--oracle",
            "maybe",
        ],
        "oracle",
    );
    bad_field(
        &[
            "check-theorem2",
            "--group",
            "cyclic(6)",
            "--connection",
            "[1]",
            "--gamma",
            "[2]",
        ],
        "gamma",
    );
    bad_field(
        &[
            "spectrum",
            "--group",
            "symmetric(3)",
            "--connection",
            r#"{"elements":[1]}"#,
        ],
        "connection",
    );
    let out = cli(&["classes"], Some("{not json"));
    assert_eq!(out.status.code(), Some(2));

    // a zero tolerance makes the floating comparison fail on irrational values
    let out = cli(
        &[
            "spectrum",
            "--group",
            "cyclic(5)",
            "--connection",
            "[1,4]",
            "--oracle",
            "floating",
            "--tol",
            "0",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["passed"], false);
}

#[test]
fn verify_all_small_groups_twice() {
    let job = r#"{"groups": ["dihedral(4)", "quaternion(8)", "symmetric(3) x cyclic(2)"], "oracle": "on"}"#;
    let a = cli(&["verify-all"], Some(job));
    let b = cli(&["verify-all"], Some(job));
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["passed"], true);
    assert_eq!(v["results"].as_array().unwrap().len(), 3);
}
