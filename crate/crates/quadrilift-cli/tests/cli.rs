//! End-to-end tests of the `quadrilift` binary: pinned wire formats,
//! exit-code contract, and byte-for-byte determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quadrilift"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_line(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn quadruple_path(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("../../quadruples");
    p.push(name);
    p.to_string_lossy().into_owned()
}

#[test]
fn hilbert_pinned_output() {
    let out = run(&["hilbert", "-a", "2", "-b", "5", "--place", "p:5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_line(&out), "{\"symbol\":-1}\n");
}

#[test]
fn invariants_pinned_output() {
    let out = run(&["invariants", "--q", r#"{"diag":["1","1","1"]}"#]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout_line(&out),
        "{\"dim\":3,\"disc\":\"1\",\"hasse\":{\"real\":1,\"p:2\":1}}\n"
    );
}

#[test]
fn verdict_isomorphic_not_admissible_conjectural() {
    let out = run(&["verdict", "--quadruple", &quadruple_path("isomorphic_3_1.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_line(&out), "{\"verdict\":\"isomorphic\",\"pole_at\":\"1\"}\n");

    let out = run(&["verdict", "--quadruple", &quadruple_path("cc_violating.json")]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout_line(&out), "{\"verdict\":\"not-admissible\"}\n");

    let out = run(&["verdict", "--quadruple", &quadruple_path("conjectural_n2.json")]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout_line(&out), "{\"verdict\":\"conjectural\"}\n");
}

#[test]
fn verdict_full_report_carries_the_summary() {
    let out =
        run(&["verdict", "--quadruple", &quadruple_path("isomorphic_3_1.json"), "--full"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_line(&out)).unwrap();
    assert_eq!(v["verdict"], "isomorphic");
    assert_eq!(v["summary"]["dim"], 3);
    assert_eq!(v["summary"]["dimp"], 1);
    assert_eq!(v["rho"], "1");
    assert_eq!(v["admissible"], true);
    assert_eq!(v["pole_at_rho"], true);
}

#[test]
fn usage_error_exits_2() {
    let out = run(&["not-a-subcommand"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["hilbert", "-a", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_input_exits_1() {
    let out = run(&["invariants", "--q", r#"{"diag":"#]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));

    let out = run(&["hilbert", "-a", "x", "-b", "5", "--place", "p:5"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["verdict", "--quadruple", "/no/such/file.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn negative_predicates_exit_3() {
    // 7 is the classical three-square exception; the obstruction sits at 2.
    let out = run(&[
        "represents",
        "--q",
        r#"{"diag":["1","1","1"]}"#,
        "--value",
        "7",
        "--place",
        "p:2",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout_line(&out), "{\"place\":\"p:2\",\"represents\":false}\n");

    let out = run(&[
        "isometric",
        "--q",
        r#"{"diag":["1","1"]}"#,
        "--qp",
        r#"{"diag":["1","-1"]}"#,
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn isotropy_local_and_global() {
    let out = run(&["isotropy", "--q", r#"{"diag":["1","-1"]}"#]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_line(&out), "{\"isotropic\":true}\n");

    // A definite five-variable form: anisotropic over Q, flagged with a note.
    let out = run(&["isotropy", "--q", r#"{"diag":["1","1","1","1","1"]}"#]);
    assert_eq!(out.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_str(&stdout_line(&out)).unwrap();
    assert_eq!(v["isotropic"], false);
    assert!(v["note"].as_str().unwrap().contains("dim >= 5"));

    // ...but isotropic in every completion, e.g. at 3.
    let out = run(&[
        "isotropy",
        "--q",
        r#"{"diag":["1","1","1","1","1"]}"#,
        "--place",
        "p:3",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn spinor_norm_of_a_coordinate_swap() {
    // Swapping e1, e2 and negating e3 factors into two reflections with
    // spinor norm class 2·1.
    let out = run(&[
        "spinor-norm",
        "--q",
        r#"{"diag":["1","1","1"]}"#,
        "--h",
        r#"["0","1","0","1","0","0","0","0","-1"]"#,
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout_line(&out),
        "{\"spinor_norm\":\"2\",\"det\":\"1\",\"reflections\":2}\n"
    );
}

#[test]
fn character_eval_at_minus_identity_returns_eps() {
    let out = run(&[
        "character-eval",
        "--q",
        r#"{"diag":["1","1","1"]}"#,
        "--lambda",
        "-1",
        "--eps",
        "-1",
        "--h",
        r#"["-1","0","0","0","-1","0","0","0","-1"]"#,
        "--place",
        "p:2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_line(&out), "{\"value\":-1}\n");
}

#[test]
fn admissible_local_constructs_characters() {
    let out = run(&[
        "admissible",
        "--q",
        r#"{"diag":["1","1","1"]}"#,
        "--qp",
        r#"{"diag":["1"]}"#,
        "--place",
        "p:5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_line(&out)).unwrap();
    assert_eq!(v["lambda"], "-1");
    assert_eq!(v["cc"], true);
    assert_eq!(v["fc"], true);
    assert_eq!(v["admissible"], true);
}

#[test]
fn admissible_global_quadruple_file() {
    let out =
        run(&["admissible", "--quadruple", &quadruple_path("isomorphic_3_1.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_line(&out)).unwrap();
    assert_eq!(v["admissible"], true);
    assert_eq!(v["automorphy"], serde_json::json!([true, true]));

    let out =
        run(&["admissible", "--quadruple", &quadruple_path("cc_violating.json")]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unramified_factor_pinned_shape() {
    let out = run(&["unramified-factor", "--p", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout_line(&out),
        "{\"p\":5,\"m\":3,\"mp\":1,\"n\":1,\"factor\":{\"numerator\":[\"1\"],\"denominator\":[\"1\",\"-1\"]}}\n"
    );
    // The closed form is gated to n = 1.
    let out = run(&["unramified-factor", "--p", "5", "--n", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn euler_is_deterministic_and_diverges_below_one() {
    let args = ["euler", "--exclude", "2,3", "--bound", "100000", "--s", "2.0"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let out = run(&["euler", "--bound", "100", "--s", "1.0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn weil_check_reports_pass() {
    let out =
        run(&["weil-check", "--p", "3", "--diag", "1", "--n", "1", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_line(&out)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["relations"]["passed"], true);
    assert_eq!(v["transitive"], true);

    // Non-prime p is an input error, not a crash.
    let out = run(&["weil-check", "--p", "4", "--diag", "1", "--n", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn selftest_fast_passes() {
    let out = run(&["selftest", "--fast"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_line(&out)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["fast"], true);
    let suites = v["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 5);
    assert!(suites.iter().all(|s| s["passed"] == true));
}
