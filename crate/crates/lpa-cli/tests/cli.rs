//! End-to-end tests of the `lpa` binary: formats, exit codes, determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn lpa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_graph(dir: &tempfile::TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

const ARROW: &str = "vertex u v\nedge u v\n";
const LOOP: &str = "vertex v\nedge v v\n";
const EMITTER_CYCLE: &str = "vertex w h v\nedge w h inf\nedge w v\nedge v w\n";

#[test]
fn analyze_text_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_graph(&dir, "loop.graph", LOOP);
    let out = lpa(&["analyze", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("spectrum: 2 node(s)"));
    assert!(text.contains("rational no (R0)"));
    assert!(text.contains("oracle comparison: consistent"));

    let out = lpa(&["analyze", path.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["spectrum"].as_array().unwrap().len(), 2);
    assert_eq!(json["oracle"]["consistent"], serde_json::Value::Bool(true));
}

#[test]
fn analyze_structured_input() {
    let dir = tempfile::tempdir().unwrap();
    let doc = r#"{"vertices":["u","v"],"edges":[{"source":"u","target":"v"}]}"#;
    let path = write_graph(&dir, "arrow.json", doc);
    let out = lpa(&["analyze", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("spectrum: 1 node(s)"));
}

#[test]
fn input_errors_exit_1() {
    let out = lpa(&["analyze", "/nonexistent/file.graph"]);
    assert_eq!(out.status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let path = write_graph(&dir, "bad.graph", "edge a b\n");
    let out = lpa(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 1"));

    // usage errors are input errors too
    let out = lpa(&["analyze"]);
    assert_eq!(out.status.code(), Some(1));
    let out = lpa(&["example", "nope", "--windows", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let out = lpa(&["verify-dm", "--fuzz", "3"]);
    assert_eq!(out.status.code(), Some(1)); // seed is mandatory
    let out = lpa(&["analyze", "x", "--field", "finite:6"]);
    assert_eq!(out.status.code(), Some(1)); // 6 is not a prime power
}

#[test]
fn verify_dm_file_and_fuzz() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_graph(&dir, "c.graph", EMITTER_CYCLE);
    let out = lpa(&["verify-dm", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("spectrum nodes: 4"));
    assert!(text.contains("verdict: consistent"));

    let out = lpa(&[
        "verify-dm",
        "--fuzz",
        "10",
        "--seed",
        "3",
        "--max-vertices",
        "5",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("passed: 10  failed: 0"));
}

#[test]
fn verify_dm_fuzz_500_seed_7() {
    let out = lpa(&[
        "verify-dm",
        "--fuzz",
        "500",
        "--seed",
        "7",
        "--max-vertices",
        "8",
    ]);
    assert!(
        out.status.success(),
        "expected exit 0, got {:?}",
        out.status
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("passed: 500  failed: 0"));
}

#[test]
fn injected_fault_exits_3() {
    let out = lpa(&["verify-dm", "--fuzz", "2", "--seed", "11", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("first failing seed: 11"));
}

#[test]
fn example_commands() {
    let out = lpa(&["example", "lattice", "--windows", "2,3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("the zero ideal is primitive — Certified"));
    assert!(text.contains("the zero ideal is strongly primitive — Refuted"));

    let out = lpa(&[
        "example",
        "rational-plane",
        "--windows",
        "2",
        "--field",
        "uncountable",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("each P_i is locally closed — Refuted"));
    assert!(text.contains("each P_i is rational — Certified"));

    let out = lpa(&[
        "example",
        "rational-plane",
        "--windows",
        "2",
        "--field",
        "countable",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("each P_i is rational — Inconclusive"));

    // --windows is required
    let out = lpa(&["example", "lattice"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn dot_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let arrow = write_graph(&dir, "a.graph", ARROW);
    let out = lpa(&["dot", arrow.to_str().unwrap(), "--graph"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("->").count(), 1);
    assert!(text.contains("\"u\""));
    assert!(text.contains("\"v\""));

    let cyc = write_graph(&dir, "c.graph", EMITTER_CYCLE);
    let out = lpa(&["dot", cyc.to_str().unwrap(), "--spectrum"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches(" [label=\"I(").count(), 4);
    assert_eq!(text.matches("->").count(), 3); // the chain

    // exactly one mode
    let out = lpa(&["dot", arrow.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let out = lpa(&["dot", arrow.to_str().unwrap(), "--graph", "--spectrum"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_graph(&dir, "c.graph", EMITTER_CYCLE);
    for args in [
        vec![
            "analyze",
            path.to_str().unwrap(),
            "--json",
            "--field",
            "finite:2",
        ],
        vec!["analyze", path.to_str().unwrap()],
        vec!["verify-dm", "--fuzz", "5", "--seed", "21", "--json"],
        vec!["example", "lattice", "--windows", "2", "--json"],
        vec!["dot", path.to_str().unwrap(), "--spectrum"],
    ] {
        let first = lpa(&args);
        let second = lpa(&args);
        assert!(first.status.success(), "command {args:?} failed");
        assert_eq!(
            first.stdout, second.stdout,
            "non-deterministic output for {args:?}"
        );
    }
}

#[test]
fn help_and_version_exit_0() {
    assert!(lpa(&["--help"]).status.success());
    assert!(lpa(&["--version"]).status.success());
}
