//! End-to-end runs of the `imds` binary: exit codes, output determinism
//! and export dispatch.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_imds"))
}

fn testdata(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("testdata")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn corpus() -> String {
    testdata("two_semaphores.imds").display().to_string()
}

#[test]
fn validate_accepts_the_corpus() {
    let out = run(&["validate", &corpus()]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("3 agents, 5 servers, 24 actions"));
}

#[test]
fn validate_rejects_cross_server_input_pair() {
    let dir = std::env::temp_dir().join(format!("imds-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.imds");
    std::fs::write(
        &bad,
        "server: s1, services {go}, states {go_st}, actions\n\
         {A.s1.go, s2.idle} -> {s2.idle},\nend;\n\
         server: s2, services {nudge}, states {idle}, end;\n\
         agents: A; servers: s1, s2;\n\
         init -> { A.s1.go, s1.go_st, s2.idle }.",
    )
    .unwrap();
    let out = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(
        stderr.contains("action 0") && stderr.contains("input state belongs to"),
        "{stderr}"
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn missing_file_is_an_io_error() {
    let out = run(&["validate", "/nonexistent/nowhere.imds"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_reports_verdicts_and_policy_exit() {
    let out = run(&["check", &corpus()]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("resource deadlock in A[1]: TRUE"));
    assert!(stdout.contains("total deadlock: FALSE"));

    let out = run(&["check", &corpus(), "--fail-on-deadlock"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn check_json_is_byte_identical_across_runs() {
    let first = run(&["check", &corpus(), "--json"]);
    let second = run(&["check", &corpus(), "--json"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert!(!first.stdout.is_empty());
}

#[test]
fn single_formula_evaluation() {
    let out = run(&["check", &corpus(), "--formula", "EF terminal"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("FALSE"), "{stdout}");

    let out = run(&[
        "check",
        &corpus(),
        "--formula",
        "EF (pending(agent:A[1]) & AG !enabled(agent:A[1]))",
    ]);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("TRUE"), "{stdout}");

    let out = run(&["check", &corpus(), "--formula", "EF ("]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn lts_prints_golden_counts() {
    let out = run(&["lts", &corpus()]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("states: 136"));
    assert!(stdout.contains("transitions: 344"));
}

#[test]
fn export_promela_matches_golden() {
    let out = run(&["export", &corpus(), "promela"]);
    assert_eq!(out.status.code(), Some(0));
    let golden = std::fs::read(testdata("two_semaphores.pml")).unwrap();
    assert_eq!(out.stdout, golden);
}

#[test]
fn export_dot_respects_render_limit() {
    let out = run(&["export", &corpus(), "lts-dot", "--render-limit", "10"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("too large"), "{stderr}");

    let out = run(&["export", &corpus(), "lts-dot"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("digraph lts {"));
}

#[test]
fn views_roundtrip_through_the_binary() {
    let out = run(&["views", &corpus(), "--view", "agent"]);
    assert_eq!(out.status.code(), Some(0));
    let agent_text = String::from_utf8(out.stdout).unwrap();
    assert!(agent_text.contains("agent: A[1],"));

    // The re-rendered text is itself a valid model describing the same
    // system.
    let original = imds::parse::load_source(
        &std::fs::read_to_string(testdata("two_semaphores.imds")).unwrap(),
    )
    .unwrap()
    .spec;
    let reparsed = imds::parse::load_source(&agent_text).unwrap().spec;
    assert_eq!(original.canonical_form(), reparsed.canonical_form());
}

#[test]
fn state_limit_surfaces_as_model_error() {
    let out = run(&["check", &corpus(), "--max-states", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("state limit exceeded"));
}
