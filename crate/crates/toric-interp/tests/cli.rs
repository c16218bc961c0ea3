//! End-to-end checks of the compiled binary: exit codes, output contracts,
//! and byte-for-byte determinism across repeated runs.

use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_toric-interp"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf8 stdout"),
        String::from_utf8(out.stderr).expect("utf8 stderr"),
    )
}

const FIRST_PRIME: &str = "4611686018427387847";

#[test]
fn classify_reports_status_and_rule() {
    let (code, stdout, _) = run(&["classify", "1", "2", "3"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("status: MDS"));
    assert!(stdout.contains("minus_K_big"));
    assert!(stdout.contains(FIRST_PRIME), "output must name its primes");
    assert!(stdout.contains("toric-interp 0.1.0"));
}

#[test]
fn invalid_triple_is_a_usage_error() {
    let (code, _, stderr) = run(&["classify", "2", "4", "5"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("coprime"));
}

#[test]
fn unknown_flags_are_rejected() {
    let (code, _, _) = run(&["--bogus", "classify", "1", "2", "3"]);
    assert_eq!(code, 2);
}

#[test]
fn missing_support_source_is_a_usage_error() {
    let (code, _, stderr) = run(&["empty", "--m", "2"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("support source"));
}

#[test]
fn point_and_leftmost_conflict() {
    let (code, _, _) = run(&[
        "separate",
        "--wpp",
        "1,1,1,2",
        "--m",
        "2",
        "--point",
        "0,0",
        "--leftmost",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn json_envelope_names_tool_primes_and_seed() {
    let (code, stdout, _) = run(&["--json", "classify", "1", "2", "3"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).expect("valid json");
    assert_eq!(v["tool"]["name"], "toric-interp");
    assert_eq!(v["primes"].as_array().unwrap().len(), 10);
    assert_eq!(v["primes"][0], FIRST_PRIME);
    assert_eq!(v["result"]["status"], "MDS");
    assert!(v.get("seed").is_none());

    let (code, stdout, _) = run(&["--json", "--seed", "5", "classify", "1", "2", "3"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).expect("valid json");
    assert_eq!(v["primes"].as_array().unwrap().len(), 14);
    assert_eq!(v["seed"], 5);
}

#[test]
fn emptiness_verdicts_name_prime_or_exact() {
    // full row rank: certified by a named prime (no line has a double point)
    let (code, stdout, _) = run(&["empty", "--wpp", "1,1,1,1", "--m", "2"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("empty: true"));
    assert!(stdout.contains(&format!("method: modular (prime {FIRST_PRIME})")));

    // rank deficit: exact verdict with a kernel witness
    let (code, stdout, _) = run(&["empty", "--wpp", "1,1,1,2", "--m", "2"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("empty: false"));
    assert!(stdout.contains("method: exact"));
    assert!(stdout.contains("witness"));
}

#[test]
fn separate_prints_a_delta_polynomial() {
    let (code, stdout, _) = run(&[
        "separate",
        "--triangle",
        "0,0;1,0;0,1",
        "--m",
        "2",
        "--leftmost",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("separable: true"));
    assert!(stdout.contains("polynomial: (1)*1 + (-1)*y^1 + (-1)*x^1"));
}

#[test]
fn gk_check_rejects_witness_request_when_criterion_fails() {
    let (code, stdout, _) = run(&["gk-check", "--triangle", "0,0;1,2;3,1"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("criterion: false"));
    assert!(stdout.contains("first failure: setup"));

    let (code, _, stderr) = run(&["gk-check", "--triangle", "0,0;1,2;3,1", "--d", "1"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("criterion-true"));
}

#[test]
fn gk_check_verifies_witnesses_at_given_dilations() {
    let (code, stdout, _) = run(&[
        "gk-check",
        "--triangle",
        "-5/16,23/16;0,0;5/8,1/8",
        "--d",
        "16,32",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("criterion: true"));
    assert!(stdout.contains("witness at d=16"));
    assert!(stdout.contains("witness at d=32"));
    assert!(stdout.contains("points checked 124"));
}

#[test]
fn question1170_reports_both_degree_bounds_by_default() {
    let (code, stdout, _) = run(&["question1170", "--q", "1"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("support: 602 points"));
    assert!(stdout.contains("m_q: 35"));
    assert!(stdout.contains("degree bound m (multiplicity 35): empty: true"));
    assert!(stdout.contains(FIRST_PRIME));
    assert!(stdout.contains("degree bound m-1 (multiplicity 34): empty: false"));
}

#[test]
fn question1170_rejects_out_of_range_q() {
    let (code, _, _) = run(&["question1170", "--q", "6"]);
    assert_eq!(code, 2);
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        vec!["--json", "question1170", "--q", "1", "--degree", "m-1"],
        vec![
            "gk-check",
            "--triangle",
            "-5/16,23/16;0,0;5/8,1/8",
            "--d",
            "16",
        ],
        vec![
            "--json",
            "--seed",
            "11",
            "classify",
            "9",
            "10",
            "13",
            "--search-depth",
            "5",
        ],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a, b, "args {args:?} must be deterministic");
    }
}

#[test]
fn negcurve_names_hits_with_witnesses() {
    let (code, stdout, _) = run(&["negcurve", "1", "1", "2", "--max-d", "2"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("hit: d=1 m=1"));
    assert!(stdout.contains("witness [1, -1]"));
}

#[test]
fn scan_csv_matches_stdout_csv() {
    let dir = std::env::temp_dir().join("toric-interp-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("scan.csv");
    let path_str = path.to_str().unwrap();

    let (code, stdout, _) = run(&["scan", "--sum-max", "15"]);
    assert_eq!(code, 0);
    let (code2, _, _) = run(&["scan", "--sum-max", "15", "--csv", path_str]);
    assert_eq!(code2, 0);
    let file = std::fs::read_to_string(&path).unwrap();
    assert!(file.starts_with("a,b,c,status,first_rule,neg_d,neg_m\n"));
    assert!(
        stdout.ends_with(&file),
        "stdout body must equal the CSV file"
    );
    std::fs::remove_file(&path).ok();
}
