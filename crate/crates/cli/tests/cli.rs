//! End-to-end tests of the binary: exit codes, report formats, determinism.

use std::path::Path;
use std::process::{Command, Output};

const SAMPLE: &str = "q2*(9*q1^2+q2^2)/q1^3";
const OBSTRUCTED: &str = "q2*(q2-q1)*(q2-2*q1)/q1^3";

fn zerok(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zerok"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn corpus_path() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus/standard.pots")
        .display()
        .to_string()
}

#[test]
fn exit_codes_follow_the_verdict() {
    let hold = zerok(&["analyze", "--potential", SAMPLE, "--vars", "q1,q2"]);
    assert_eq!(hold.status.code(), Some(0), "{}", stdout_of(&hold));

    let obstructed = zerok(&["analyze", "--potential", OBSTRUCTED, "--vars", "q1,q2"]);
    assert_eq!(obstructed.status.code(), Some(3));

    // no proper fixed direction: the method does not apply
    let inapplicable = zerok(&[
        "analyze",
        "--potential",
        "(q2^3+3*q1^2*q2)/q1^3",
        "--vars",
        "q1,q2",
    ]);
    assert_eq!(inapplicable.status.code(), Some(4));
}

#[test]
fn usage_and_parse_errors_are_distinguished() {
    let missing = zerok(&["analyze"]);
    assert_eq!(missing.status.code(), Some(1));

    let unknown_flag = zerok(&["analyze", "--no-such-flag"]);
    assert_eq!(unknown_flag.status.code(), Some(1));

    let bad_expr = zerok(&["analyze", "--potential", "q1+*q2", "--vars", "q1,q2"]);
    assert_eq!(bad_expr.status.code(), Some(2));

    let bad_var = zerok(&["analyze", "--potential", "q1+q3", "--vars", "q1,q2"]);
    assert_eq!(bad_var.status.code(), Some(2));

    let help = zerok(&["--help"]);
    assert_eq!(help.status.code(), Some(0));

    let version = zerok(&["--version"]);
    assert_eq!(version.status.code(), Some(0));
}

#[test]
fn json_report_is_byte_identical_for_fixed_seed() {
    let args = [
        "analyze",
        "--potential",
        "q2*q3/q1^2",
        "--vars",
        "q1,q2,q3",
        "--seed",
        "7",
        "--format",
        "json",
    ];
    let first = zerok(&args);
    let second = zerok(&args);
    assert_eq!(first.status.code(), Some(3));
    assert!(!first.stdout.is_empty());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn corpus_analysis_emits_an_ordered_array() {
    let path = corpus_path();
    let out = zerok(&["analyze", "--corpus", &path, "--format", "json"]);
    assert_eq!(out.status.code(), Some(3), "corpus has obstructed members");
    let reports: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid json");
    let arr = reports.as_array().expect("array of reports");
    assert_eq!(arr.len(), 6);
    let names: Vec<&str> = arr
        .iter()
        .map(|r| r["input"]["name"].as_str().unwrap())
        .collect();
    assert_eq!(
        names,
        [
            "semisimple-cubic",
            "cubic-family-1-2",
            "cubic-family-3-5",
            "harmonic",
            "inverse-cube",
            "three-dof-shear"
        ],
        "output preserves input order"
    );
    assert_eq!(arr[0]["analysis"]["verdict"]["status"], "hold");
    assert_eq!(arr[1]["analysis"]["verdict"]["status"], "non-integrable");
    assert_eq!(arr[3]["analysis"]["verdict"]["status"], "hold");
    assert!(arr[3]["analysis"]["continuum"].as_bool().unwrap());
}

#[test]
fn corpus_respects_thread_cap() {
    let path = corpus_path();
    let out = Command::new(env!("CARGO_BIN_EXE_zerok"))
        .args(["analyze", "--corpus", &path, "--format", "json"])
        .env("ZERO_K_THREADS", "1")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(3));
    let reports: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid json");
    assert_eq!(reports.as_array().unwrap().len(), 6);
}

#[test]
fn scan_solves_the_cubic_family_constraints() {
    let out = zerok(&[
        "scan",
        "--family",
        "q2*(q2-$a*q1)*(q2-$b*q1)/q1^3",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "solved member passes");
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid json");
    assert_eq!(doc["mode"], "solve");
    assert_eq!(doc["sum"]["re"], "0");
    assert_eq!(doc["product"]["re"], "9");
    let params = doc["parameters"].as_array().expect("split parameters");
    let ims: Vec<&str> = params.iter().map(|p| p["im"].as_str().unwrap()).collect();
    assert!(ims == ["3", "-3"] || ims == ["-3", "3"]);
    assert_eq!(
        doc["reconstructed"]["analysis"]["verdict"]["status"],
        "hold"
    );
    assert!(doc["reconstructed"]["input"]["expression"]
        .as_str()
        .unwrap()
        .contains("9"));
}

#[test]
fn scan_grid_rejects_equal_parameters_and_flags_the_rest() {
    let out = zerok(&[
        "scan",
        "--family",
        "q2*(q2-$a*q1)*(q2-$b*q1)/q1^3",
        "--grid",
        "1,2,3",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid json");
    assert_eq!(doc["mode"], "grid");
    let entries = doc["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 6, "ordered pairs with a != b");
    for e in entries {
        assert_eq!(e["report"]["analysis"]["verdict"]["status"], "non-integrable");
    }
    assert_eq!(doc["rejected"].as_array().unwrap().len(), 3);
}

#[test]
fn scan_requires_two_parameters() {
    let out = zerok(&["scan", "--family", "q2*(q2-$a*q1)/q1^2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn variational_emits_the_certificate_bundle() {
    let out = zerok(&["variational", "--lambda", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid json");
    assert_eq!(doc["format"], "certificates/v1");
    let cert = &doc["certificate"];
    assert_eq!(cert["eigenvalue"], "3");
    assert_eq!(cert["galois"], "reducible-abelian");
    assert_eq!(cert["kummer_a"], "-3/2");
    assert_eq!(cert["kummer_c"], "1/2");
    assert_eq!(cert["moment"], "2");
    assert_eq!(cert["solution"]["q_exponent"], 1);
    assert_eq!(cert["second_order_obstructed"], true);
}

#[test]
fn variational_rejects_fractional_hermite_requests() {
    let out = zerok(&["variational", "--lambda", "1/2", "--hermite"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("integer"), "explains the precondition: {err}");

    // without --hermite the fractional eigenvalue is legitimate
    let ok = zerok(&["variational", "--lambda", "1/2", "--format", "json"]);
    assert_eq!(ok.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&ok)).expect("valid json");
    assert_eq!(doc["certificate"]["galois"], "full-special-linear");
}

#[test]
fn variational_numeric_checks_attach_deviations() {
    let out = zerok(&["variational", "--lambda", "2", "--check", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid json");
    let w = doc["certificate"]["wronskian_deviation"].as_f64().unwrap();
    let t = doc["certificate"]["time_domain_deviation"].as_f64().unwrap();
    assert!(w < 1e-8, "wronskian deviation {w}");
    assert!(t < 1e-7, "time-domain deviation {t}");
}

#[test]
fn report_can_be_written_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = zerok(&[
        "analyze",
        "--potential",
        SAMPLE,
        "--vars",
        "q1,q2",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).expect("valid json");
    assert_eq!(doc["format"], "integrability-report/v1");
}

#[test]
fn certificates_section_covers_the_exact_spectrum() {
    let out = zerok(&[
        "analyze",
        "--potential",
        SAMPLE,
        "--vars",
        "q1,q2",
        "--certificates",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid json");
    let certs = doc["certificates"].as_array().expect("certificates attached");
    assert_eq!(certs.len(), 1, "one distinct eigenvalue");
    assert_eq!(certs[0]["eigenvalue"], "-1");
    assert!(certs[0]["wronskian_deviation"].as_f64().unwrap() < 1e-8);
}

#[test]
fn integrals_section_reports_the_search_summary() {
    let out = zerok(&[
        "analyze",
        "--potential",
        SAMPLE,
        "--vars",
        "q1,q2",
        "--integrals",
        "--fi-momentum-degree",
        "2",
        "--fi-box",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid json");
    let fi = &doc["integrals"];
    assert_eq!(fi["momentum_degree"], 2);
    assert!(fi["columns"].as_u64().unwrap() > 0);
    assert!(fi["dimension"].as_u64().unwrap() >= 2, "1 and H at least");
    assert_eq!(fi["beyond_energy_powers"], 0);
    assert_eq!(fi["beyond_momentum_degrees"].as_array().unwrap().len(), 0);
}

#[test]
fn epsilon_must_be_a_complex_number() {
    let out = zerok(&[
        "analyze",
        "--potential",
        SAMPLE,
        "--vars",
        "q1,q2",
        "--epsilon",
        "nonsense",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn text_and_json_carry_the_same_certificates() {
    let common = [
        "analyze",
        "--potential",
        SAMPLE,
        "--vars",
        "q1,q2",
        "--certificates",
    ];
    let text = stdout_of(&zerok(&common));
    let mut json_args = common.to_vec();
    json_args.extend(["--format", "json"]);
    let json = stdout_of(&zerok(&json_args));
    assert!(text.contains("certificate for eigenvalue -1"));
    assert!(json.contains("\"eigenvalue\": \"-1\""));
    assert!(text.contains("Kummer parameters a = 1/2, c = 1/2"));
    assert!(json.contains("\"kummer_a\": \"1/2\""));
}
