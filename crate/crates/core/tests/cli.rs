//! In-process CLI runs. `--json` output shapes are compared against the
//! schema files in `tests/golden`; set `UPDATE_GOLDEN=1` to rewrite them.

use std::io::Cursor;
use std::path::PathBuf;

use serde_json::{Map, Value};

use pentagons::cli::{run, EXIT_BUDGET, EXIT_INPUT, EXIT_MISMATCH, EXIT_OK};

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn pentagons(args: &[&str], stdin: &str) -> Output {
    let mut argv = vec!["pentagons"];
    argv.extend_from_slice(args);
    let mut input = Cursor::new(stdin.as_bytes().to_vec());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut input, &mut out, &mut err);
    Output { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

/// Replaces every value by its type name, keeping keys and nesting.
fn schema(v: &Value) -> Value {
    match v {
        Value::Null => "null".into(),
        Value::Bool(_) => "bool".into(),
        Value::Number(n) if n.is_f64() => "float".into(),
        Value::Number(_) => "integer".into(),
        Value::String(_) => "string".into(),
        Value::Array(a) => Value::Array(a.first().map(schema).into_iter().collect()),
        Value::Object(o) => Value::Object(o.iter().map(|(k, v)| (k.clone(), schema(v))).collect::<Map<_, _>>()),
    }
}

fn check_golden(name: &str, stdout: &str) {
    let doc: Value = serde_json::from_str(stdout.trim()).unwrap_or_else(|e| panic!("{name}: bad json {e}: {stdout}"));
    let got = serde_json::to_string_pretty(&schema(&doc)).unwrap() + "\n";
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &got).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(got, want, "schema of `{name}` changed");
}

#[test]
fn solve_nine() {
    let out = pentagons(&["solve", "--n", "9"], "");
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["optimum"], 1);
    check_golden("solve", &out.stdout);
}

#[test]
fn construct_then_count() {
    let points = pentagons(&["construct", "--kind", "parabolic", "--n", "16"], "");
    assert_eq!(points.code, EXIT_OK);
    let count = pentagons(&["count", "--k", "5"], &points.stdout);
    assert_eq!(count.stdout.trim(), "112");
    let json = pentagons(&["--json", "count"], &points.stdout);
    check_golden("count", &json.stdout);
}

#[test]
fn construct_report() {
    let out = pentagons(&["construct", "--kind", "pinwheel", "--k", "3", "--json"], "");
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["count5"], 12);
    assert_eq!(v["construction"]["kind"], "pinwheel");
    check_golden("construct", &out.stdout);
}

#[test]
fn encode_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let wcnf = dir.path().join("out.wcnf");
    let cubes = dir.path().join("out.cubes");
    let out = pentagons(
        &["encode", "--n", "9", "--symmetry", "--wcnf", wcnf.to_str().unwrap(), "--cubes", cubes.to_str().unwrap(), "--json"],
        "",
    );
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let text = std::fs::read_to_string(&wcnf).unwrap();
    assert!(text.starts_with("p wcnf 210 2170 127\n"));
    assert_eq!(std::fs::read_to_string(&cubes).unwrap().lines().count(), 8);
    check_golden("encode", &out.stdout);

    let sat = pentagons(&["encode", "--n", "6", "--no-axioms", "--cnf", "-"], "");
    assert!(sat.stdout.starts_with("p cnf 20 48\n"));
}

#[test]
fn signotope_realize_verify_pipeline() {
    let points = pentagons(&["construct", "--kind", "pinwheel", "--k", "2"], "");
    let sig = pentagons(&["signotope"], &points.stdout);
    assert_eq!(sig.code, EXIT_OK);
    assert!(sig.stdout.starts_with("8\n"));
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("r.svg");
    let real = pentagons(&["realize", "--svg", svg.to_str().unwrap(), "--hull"], &sig.stdout);
    assert_eq!(real.code, EXIT_OK, "{}", real.stderr);
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<svg"));
    let verify = pentagons(&["verify", "--json"], &real.stdout);
    assert_eq!(verify.code, EXIT_OK);
    check_golden("verify", &verify.stdout);
    let again = pentagons(&["signotope"], &real.stdout);
    assert_eq!(again.stdout, sig.stdout);

    let json = pentagons(&["realize", "--json"], &sig.stdout);
    check_golden("realize", &json.stdout);
}

#[test]
fn verify_a_signotope_file() {
    let points = pentagons(&["construct", "--kind", "parabolic", "--n", "12"], "");
    let sig = pentagons(&["signotope"], &points.stdout);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.txt");
    std::fs::write(&path, &sig.stdout).unwrap();
    let out = pentagons(&["verify", "--signotope", path.to_str().unwrap()], "");
    assert_eq!((out.code, out.stdout.trim()), (EXIT_OK, "ok 12"));
}

#[test]
fn sls_summary() {
    let out = pentagons(&["sls", "--n", "11", "--seed", "3", "--target", "7", "--json"], "");
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["best"], 7);
    check_golden("sls", &out.stdout);
    let plain = pentagons(&["sls", "--n", "9", "--max-flips", "200", "--progress", "100"], "");
    assert!(plain.stderr.contains("c flips=100 best="));
    let v: Value = serde_json::from_str(&plain.stdout).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["best", "flips", "n", "restarts", "seed"]);
}

#[test]
fn cubes_and_bounds() {
    let cubes = pentagons(&["cubes", "--n", "9"], "");
    assert_eq!(cubes.stdout.lines().next(), Some("a 50 75 84 0"));
    check_golden("cubes", &pentagons(&["cubes", "--n", "9", "--json"], "").stdout);
    let csv = pentagons(&["bounds", "--n", "16", "17"], "");
    let lines: Vec<&str> = csv.stdout.lines().collect();
    assert_eq!(lines[0], "n,lower,upper,provenance");
    assert!(lines[1].starts_with("16,112,112,"));
    assert!(lines[2].starts_with("17,159,182,"));
    check_golden("bounds", &pentagons(&["bounds", "--n", "17", "--json"], "").stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(pentagons(&["count"], "not json").code, EXIT_INPUT);
    assert_eq!(pentagons(&["frobnicate"], "").code, EXIT_INPUT);
    assert_eq!(pentagons(&["solve", "--n", "9", "--bogus"], "").code, EXIT_INPUT);
    assert_eq!(pentagons(&["construct", "--kind", "pinwheel", "--n", "6"], "").code, EXIT_INPUT);
    let budget = pentagons(&["solve", "--n", "10", "--max-propagations", "100"], "");
    assert_eq!(budget.code, EXIT_BUDGET);
    let v: Value = serde_json::from_str(&budget.stdout).unwrap();
    assert_eq!(v["status"], "budget_exceeded");
    // The n = 4 pattern with two axiom violations is rejected.
    assert_eq!(pentagons(&["realize"], "4\n-+++-\n").code, EXIT_INPUT);
    assert_eq!(pentagons(&["realize"], "4\n-++-\n").code, EXIT_INPUT);
    assert_eq!(pentagons(&["--help"], "").code, EXIT_OK);
    // Collinear input is malformed, not a mismatch.
    let collinear = r#"{"n":3,"points":[["0","0"],["1","1"],["2","2"]]}"#;
    assert_eq!(pentagons(&["verify"], collinear).code, EXIT_INPUT);
    assert_ne!(EXIT_MISMATCH, EXIT_INPUT);
}
