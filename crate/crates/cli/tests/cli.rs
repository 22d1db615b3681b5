use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cremona"))
}

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/h_f7_v1.json")
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

/// Runs with `--json -` and parses stdout.
fn run_json(args: &[&str]) -> (i32, Value) {
    let out = bin().args(args).args(["--json", "-"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    (out.status.code().unwrap(), serde_json::from_str(&text).expect("stdout is JSON"))
}

fn strip_timings(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("elapsed_ms");
            map.values_mut().for_each(strip_timings);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timings),
        _ => {}
    }
}

fn check_golden(name: &str, mut report: Value) {
    strip_timings(&mut report);
    let text = serde_json::to_string_pretty(&report).unwrap() + "\n";
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &text).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing golden file {}; rerun with UPDATE_GOLDEN=1", path.display()));
    assert_eq!(text, expected, "{name} differs from the golden file");
}

fn write_fixture(name: &str, edit: impl FnOnce(&mut Value)) -> PathBuf {
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(fixture()).unwrap()).unwrap();
    edit(&mut v);
    let path = scratch(name);
    std::fs::write(&path, v.to_string()).unwrap();
    path
}

#[test]
fn verify_example_passes_on_the_fixture() {
    let (code, report) = run_json(&["verify-example", fixture().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(report["schema"], 1);
    assert_eq!(report["passed"], true);
    assert_eq!(report["checks"].as_array().unwrap().len(), 14);
    check_golden("verify_example.json", report);
}

#[test]
fn verify_example_is_deterministic() {
    let path = fixture();
    let first = scratch("first.json");
    let second = scratch("second.json");
    for out in [&first, &second] {
        let status = bin()
            .args(["verify-example", path.to_str().unwrap(), "--quiet", "--json", out.to_str().unwrap()])
            .status()
            .unwrap();
        assert!(status.success());
    }
    let load = |p: &Path| {
        let mut v: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
        strip_timings(&mut v);
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(load(&first), load(&second));
}

#[test]
fn verify_example_defaults_to_the_bundled_fixture() {
    let out = run(&["verify-example"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("14/14 checks passed"));
}

#[test]
fn perturbed_fixture_fails_the_grassmannian_check() {
    let path = write_fixture("perturbed.json", |v| {
        let e = &mut v["matrix"][5][11];
        *e = (e.as_i64().unwrap() + 1).into();
    });
    let (code, report) = run_json(&["verify-example", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(report["passed"], false);
    assert_eq!(report["checks"][0]["id"], "section_input");
    assert!(report["checks"][0]["computed"].as_str().unwrap().contains("point row 5"));
}

#[test]
fn verify_example_input_errors() {
    assert_eq!(run(&["verify-example", "/no/such/file.json"]).status.code(), Some(2));
    let path = write_fixture("short.json", |v| {
        v["matrix"].as_array_mut().unwrap().pop();
    });
    assert_eq!(run(&["verify-example", path.to_str().unwrap()]).status.code(), Some(2));
    let garbage = scratch("garbage.json");
    std::fs::write(&garbage, "not json").unwrap();
    assert_eq!(run(&["verify-example", garbage.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn intersection_of_the_example() {
    let (code, report) = run_json(&["intersection"]);
    assert_eq!(code, 0);
    assert_eq!(report["table"]["mixed"]["l3m"], 4);
    assert_eq!(report["table"]["mixed"]["l2m2"], 7);
    assert_eq!(report["table"]["le"]["e4"], -159);
    check_golden("intersection.json", report);
}

#[test]
fn intersection_reads_a_file_and_stdin() {
    let path = scratch("example.json");
    let example = r#"{"n":4,"m":1,"xi":4,"d":9,"delta":3,"kc":3,"k2":-3,"c2":27,"chi":2,"g":7}"#;
    std::fs::write(&path, example).unwrap();
    let (code, from_file) = run_json(&["intersection", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (_, default) = run_json(&["intersection"]);
    assert_eq!(from_file, default);

    use std::io::Write;
    let mut child = bin()
        .args(["intersection", "-", "--json", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(example.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let piped: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(piped, default);
}

#[test]
fn intersection_without_nodes_reports_m4() {
    let path = scratch("delta0.json");
    std::fs::write(&path, r#"{"n":4,"m":1,"xi":4,"d":9,"delta":0,"kc":3,"k2":-3,"c2":27,"chi":2,"g":7}"#).unwrap();
    let (code, report) = run_json(&["intersection", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(report["m4"]["first"], -17);
    assert_eq!(report["m4"]["second"], -11);
    assert!(report["table"].is_null());
    assert!(!report["issues"].as_array().unwrap().is_empty());
}

#[test]
fn intersection_rejects_malformed_json() {
    let path = scratch("malformed.json");
    std::fs::write(&path, r#"{"n": 4, "m": }"#).unwrap();
    assert_eq!(run(&["intersection", path.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&path, r#"{"n": 4}"#).unwrap();
    assert_eq!(run(&["intersection", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn classify_default_run() {
    let (code, report) = run_json(&["classify"]);
    assert_eq!(code, 0);
    assert_eq!(report["survivor_tuple"], serde_json::json!([4, 1, 4, 9, 3]));
    assert_eq!(report["certificates"].as_array().unwrap().len(), 8);
    check_golden("classify.json", report);
}

#[test]
fn classify_show_steps_prints_the_parity_argument() {
    let out = run(&["classify", "--show-steps"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("62d - 2c2 + 12delta = 465"));
    assert!(text.contains("465 is odd"));
    assert!(text.contains("[cited]"));
}

#[test]
fn classify_single_case() {
    let (code, report) = run_json(&["classify", "--case", "f"]);
    assert_eq!(code, 0);
    let certs = report["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 1);
    let claims: Vec<&str> = certs[0]["steps"].as_array().unwrap().iter().map(|s| s["claim"].as_str().unwrap()).collect();
    assert!(claims.iter().any(|c| c.contains("C(8, 4) = 70")));
    assert_eq!(report["case"]["n"], 24);

    let (_, b) = run_json(&["classify", "--case", "b"]);
    assert_eq!(b["certificates"].as_array().unwrap().len(), 2);
    assert_eq!(run(&["classify", "--case", "q"]).status.code(), Some(2));
}

#[test]
fn lattice_report() {
    let (code, report) = run_json(&["lattice"]);
    assert_eq!(code, 0);
    assert_eq!(report["multiplier"], 7);
    assert_eq!(report["invariant_factors"], serde_json::json!([1, 1, 1, 1, 1, 1, 1, 12]));
    assert_eq!(report["m_squared"]["solution"], serde_json::json!([7, -3, 4, 4, 4, 2, 2, 2]));
    check_golden("lattice.json", report);
}

#[test]
fn motivic_identity() {
    let (code, report) = run_json(&["motivic"]);
    assert_eq!(code, 0);
    assert_eq!(report["identity"], "[R_L]*L - [R_M]*L");
    assert!(report["point_counts"].is_null());
    check_golden("motivic.json", report);
}

#[test]
fn motivic_point_counts() {
    let (code, report) = run_json(&["motivic", "--points", fixture().to_str().unwrap()]);
    assert_eq!(code, 0);
    let p = &report["point_counts"];
    assert_eq!(p["counts"]["r_l"], 82);
    assert_eq!(p["r_m"], 82);
    assert_eq!(p["x_from_l"], p["x_from_m"]);
    assert_eq!(run(&["motivic", "--points", "/no/such/file"]).status.code(), Some(2));
}

#[test]
fn quiet_and_json_path() {
    let path = scratch("lattice.json");
    let out = bin().args(["lattice", "--quiet", "--json", path.to_str().unwrap()]).output().unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "lattice");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}
