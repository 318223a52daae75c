use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use wgdbl_cli::{run, Outcome, Report};

fn wgdbl(args: &[&str]) -> Outcome {
    run(std::iter::once("wgdbl").chain(args.iter().copied()))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wgdbl-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wgdbl"))
}

#[test]
fn built_fractions_validate_as_a_double_category() {
    let out = wgdbl(&["fractions", "build", "fix-posb.json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stderr.contains("result: pass"));
    let emitted: Value = serde_json::from_str(&out.stdout).unwrap();
    assert!(emitted.get("X0").is_some() && emitted.get("X1").is_some());

    let path = scratch("posb-double.json");
    std::fs::write(&path, &out.stdout).unwrap();
    let out = wgdbl(&["dblcat", "validate", path.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let sizes = out.report.unwrap().output.unwrap();
    assert_eq!(sizes["objects"], 9);
    assert_eq!(sizes["verticals"], 25);
    assert_eq!(sizes["horizontals"], 49);
    assert_eq!(sizes["cells"], 225);
}

#[test]
fn nonglobular_input_fails_with_a_witness() {
    let out = wgdbl(&["dblcat", "check-wg", "v-z2.json"]);
    assert_eq!(out.code, 1);
    let r = out.report.unwrap();
    assert!(!r.passed);
    let w = &r.witnesses["vertical category equivalent to a discrete one"];
    assert_eq!(w["fully_faithful"], false);
    assert!(out.stdout.contains("FAIL segal condition n=2"));
}

#[test]
fn group_fixtures_pass_checks() {
    for (module, op, input) in [
        ("fincat", "check", "fix-arrow.json"),
        ("dblcat", "check-wg", "fix-bg.json"),
        ("fractions", "check", "fix-iso.json"),
        ("homotopy", "groups", "fix-b2a.json"),
        ("bicat", "omega", "fix-posb.json"),
    ] {
        let out = wgdbl(&[module, op, input]);
        assert_eq!(out.code, 0, "{module} {op} {input}: {}", out.stdout);
    }
}

#[test]
fn help_exits_zero() {
    let out = wgdbl(&["--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("Operations:"));
    let status = binary().arg("--help").output().unwrap();
    assert!(status.status.success());
}

#[test]
fn unknown_operation_is_an_input_error() {
    let out = wgdbl(&["dblcat", "nope", "fix-bg.json"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("unknown command `dblcat nope`"));
    assert_eq!(wgdbl(&["nomodule", "check", "fix-bg.json"]).code, 2);
}

#[test]
fn malformed_json_reports_its_position() {
    let path = scratch("bad.json");
    std::fs::write(&path, "{\n  \"objects\": [\"a\",\n}\n").unwrap();
    let out = wgdbl(&["fincat", "check", path.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.starts_with(&format!("error: {}:3:", path.display())), "{}", out.stderr);
}

#[test]
fn missing_inputs_are_input_errors() {
    let out = wgdbl(&["fincat", "check"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("needs an input file"));
    let out = wgdbl(&["fincat", "check", "does-not-exist.json"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("no such file"));
}

#[test]
fn json_reports_are_byte_identical_across_runs() {
    let a = wgdbl(&["fractions", "classify", "fix-iso.json", "--json"]);
    let b = wgdbl(&["fractions", "classify", "fix-iso.json", "--json"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let r: Report = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!(Some(r), a.report);

    let c = binary().args(["fractions", "classify", "fix-iso.json", "--json"]).output().unwrap();
    assert_eq!(String::from_utf8(c.stdout).unwrap(), a.stdout);
}

#[test]
fn dot_output_is_written() {
    let path = scratch("posb.dot");
    let _ = std::fs::remove_file(&path);
    let out = wgdbl(&["fractions", "build", "fix-posb.json", "--dot", path.to_str().unwrap()]);
    assert_eq!(out.code, 0);
    let dot = std::fs::read_to_string(&path).unwrap();
    assert!(dot.starts_with("digraph"));
}

#[test]
fn fixtures_directory_from_the_environment() {
    let dir = scratch("fixtures");
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("tiny.json"), r#"{"objects": ["a"], "arrows": [{"id": "1_a", "src": "a", "tgt": "a"}], "identities": {"a": "1_a"}, "compose": []}"#).unwrap();
    let out = binary().args(["fincat", "check", "tiny.json"]).env("WGDBL_FIXTURES", &dir).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = binary().args(["fincat", "check", "tiny.json"]).env_remove("WGDBL_FIXTURES").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sampling_is_deterministic_in_the_seed() {
    let a = wgdbl(&["fractions", "sample", "--seed", "11", "--json"]);
    let b = wgdbl(&["fractions", "sample", "--seed", "11", "--json"]);
    assert_eq!(a.code, 0, "{}", a.stdout);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn unknown_basepoint_is_rejected() {
    let out = wgdbl(&["homotopy", "groups", "fix-bg.json", "--basepoint", "nowhere"]);
    assert_ne!(out.code, 0);
}
