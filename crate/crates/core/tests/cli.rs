use std::path::Path;

use lambda_hvm::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("lambda-hvm").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const T_CIRCUIT: &str = r#"{"d":2,"n":1,"state":{"preset":"T"},"ops":[{"measure":{"a":"Z:(1)|X:(0)"}}]}"#;

#[test]
fn vertices_writes_a_file_that_decompose_reads_back() {
    let dir = tempfile::tempdir().unwrap();
    let vfile = dir.path().join("v.txt");
    let (code, out, _) = call(&["vertices", "-d", "3", "-n", "1", "--out", vfile.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("vertices 81 certified, 0 rejected"), "{out}");
    let (code, out, err) = call(&["decompose", "strange", "-d", "3", "--vertices", vfile.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(out.starts_with("# state strange mode exact"), "{out}");
    assert!(out.contains("vertex,weight"));
}

#[test]
fn t_state_decomposes_numerically() {
    let (code, out, _) = call(&["decompose", "T"]);
    assert_eq!(code, 0);
    let weights: f64 = out
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("vertex"))
        .map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((weights - 1.0).abs() < 1e-10);
    assert!(out.contains("mode numeric"));
}

#[test]
fn exact_mode_refuses_irrational_states() {
    let (code, _, err) = call(&["decompose", "T", "--mode", "exact"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error: "), "{err}");
}

#[test]
fn matrix_state_from_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "s.json", r#"{"matrix": [["3/4","0"],["0","1/4"]]}"#);
    let (code, out, err) = call(&["decompose", &f]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("mode exact"));
}

#[test]
fn unknown_state_is_a_usage_error() {
    let (code, _, err) = call(&["decompose", "no-such-state"]);
    assert_eq!(code, 2);
    assert!(err.contains("neither a preset"), "{err}");
}

#[test]
fn malformed_circuit_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "c.json", "{\"d\":2,\n\"n\":1,\n\"state\":}");
    let (code, _, err) = call(&["simulate", &f]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn simulate_is_deterministic_in_the_seed() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "c.json", T_CIRCUIT);
    let a = call(&["simulate", &f, "--shots", "2000", "--seed", "11"]);
    let b = call(&["simulate", &f, "--shots", "2000", "--seed", "11"]);
    let c = call(&["simulate", &f, "--shots", "2000", "--seed", "12"]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    assert_ne!(a.1, c.1);
    assert!(a.1.starts_with("shot,m0,final_vertex\n"));
    assert!(a.1.contains("# chi-square"));
}

#[test]
fn simulate_out_file_holds_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "c.json", T_CIRCUIT);
    let csv = dir.path().join("shots.csv");
    let (code, out, _) = call(&["simulate", &f, "--shots", "50", "--out", csv.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("# outcomes"));
    let text = std::fs::read_to_string(csv).unwrap();
    assert_eq!(text.lines().count(), 51);
}

#[test]
fn empty_circuit_has_nothing_to_sample() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "c.json", r#"{"d":3,"n":1,"state":{"preset":"norrell"},"ops":[]}"#);
    let (code, out, _) = call(&["simulate", &f, "-d", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("no measurements"));
}

#[test]
fn gates_and_two_qudit_measurements() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "c.json",
        r#"{"d":3,"n":1,"state":{"preset":"strange"},"ops":[
            {"gate":{"name":"F","targets":[0]}},
            {"measure":{"a":"Z:(1)|X:(0)"}},
            {"gate":{"name":"P","targets":[0]}},
            {"measure":{"a":"Z:(1)|X:(1)"}}]}"#,
    );
    let (code, out, err) = call(&["simulate", &f, "-d", "3", "--shots", "3000"]);
    assert_eq!(code, 0, "{err}");
    let p: f64 = out
        .lines()
        .find(|l| l.starts_with("# chi-square"))
        .and_then(|l| l.split_whitespace().last())
        .unwrap()
        .parse()
        .unwrap();
    assert!(p > 1e-4, "{out}");
}

#[test]
fn verify_prints_json() {
    let (code, out, err) = call(&["verify", "--suite", "pauli", "-d", "3", "-n", "1"]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["suite"], "pauli");
    assert_eq!(v["passed"], true);
    assert!(err.contains("PASS"));
}

#[test]
fn missing_subcommand_is_a_usage_error() {
    let (code, _, err) = call(&[]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error: usage:"));
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("vertices"));
}
