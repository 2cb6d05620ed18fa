//! End-to-end tests of the `cpa-map` binary: exit codes, output files,
//! statistics, and LP export.

use std::path::Path;
use std::process::{Command, Output};

const SMOKERS: &str = "person = {Anna, Bob}\n\
                       smokes(person)\n\
                       cancer(person)\n\
                       1.5 !smokes(x) v cancer(x)\n";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cpa-map"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, content).expect("fixture written");
    path.to_str().expect("utf-8 path").to_owned()
}

#[test]
fn solves_and_writes_sorted_map_state() {
    let dir = tempfile::tempdir().unwrap();
    let mln = write(dir.path(), "model.mln", SMOKERS);
    let ev = write(dir.path(), "evidence.db", "smokes(Anna)\n");
    let out = dir.path().join("map.txt");

    let result = run(&["-i", &mln, "-e", &ev, "-o", out.to_str().unwrap()]);
    assert!(result.status.success(), "stderr: {}", String::from_utf8_lossy(&result.stderr));
    let state = std::fs::read_to_string(&out).unwrap();
    assert_eq!(state, "cancer(Anna)\nsmokes(Anna)\n");
}

#[test]
fn evidence_is_optional() {
    let dir = tempfile::tempdir().unwrap();
    let mln = write(dir.path(), "model.mln", "d = {A}\np(d)\n2.0 p(x)\n");
    let out = dir.path().join("map.txt");

    let result = run(&["-i", &mln, "-o", out.to_str().unwrap()]);
    assert!(result.status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "p(A)\n");
}

#[test]
fn missing_input_file_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("map.txt");
    let result = run(&["-i", "/nonexistent/model.mln", "-o", out.to_str().unwrap()]);
    assert_eq!(result.status.code(), Some(2));
}

#[test]
fn model_syntax_error_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let mln = write(dir.path(), "model.mln", "d = {A}\np(d)\n1.5 p(x) v\n");
    let out = dir.path().join("map.txt");
    let result = run(&["-i", &mln, "-o", out.to_str().unwrap()]);
    assert_eq!(result.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&result.stderr).is_empty());
}

#[test]
fn contradictory_hard_clauses_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let mln = write(dir.path(), "model.mln", "d = {A}\np(d)\np(x) .\n!p(x) .\n");
    let out = dir.path().join("map.txt");
    let result = run(&["-i", &mln, "-o", out.to_str().unwrap()]);
    assert_eq!(result.status.code(), Some(1));
}

#[test]
fn bad_gap_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let mln = write(dir.path(), "model.mln", SMOKERS);
    let out = dir.path().join("map.txt");
    let result = run(&["-i", &mln, "-o", out.to_str().unwrap(), "--gap", "1.5"]);
    assert_eq!(result.status.code(), Some(2));
}

#[test]
fn output_required_unless_export_only() {
    let dir = tempfile::tempdir().unwrap();
    let mln = write(dir.path(), "model.mln", SMOKERS);
    let result = run(&["-i", &mln]);
    assert_eq!(result.status.code(), Some(2));
}

#[test]
fn stats_go_to_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let mln = write(dir.path(), "model.mln", SMOKERS);
    let ev = write(dir.path(), "evidence.db", "smokes(Anna)\nsmokes(Bob)\n");
    let out = dir.path().join("map.txt");
    let result = run(&["-i", &mln, "-e", &ev, "-o", out.to_str().unwrap(), "--stats"]);
    assert!(result.status.success());
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("final_weight 3"), "stderr: {stderr}");
    assert!(stderr.contains("iterations 2"), "stderr: {stderr}");
    assert!(stderr.contains("converged true"), "stderr: {stderr}");
}

#[test]
fn export_only_writes_lp_without_solving() {
    let dir = tempfile::tempdir().unwrap();
    let mln = write(dir.path(), "model.mln", SMOKERS);
    let ev = write(dir.path(), "evidence.db", "smokes(Anna)\n");
    let lp = dir.path().join("model.lp");
    let result = run(&[
        "-i",
        &mln,
        "-e",
        &ev,
        "--export-lp",
        lp.to_str().unwrap(),
        "--export-only",
    ]);
    assert!(result.status.success());
    let text = std::fs::read_to_string(&lp).unwrap();
    assert!(text.starts_with("Maximize\n"));
    assert!(text.ends_with("End\n"));
}

#[test]
fn export_only_requires_export_lp() {
    let dir = tempfile::tempdir().unwrap();
    let mln = write(dir.path(), "model.mln", SMOKERS);
    let result = run(&["-i", &mln, "--export-only"]);
    assert_eq!(result.status.code(), Some(2));
}

#[test]
fn export_lp_after_solving_writes_final_program() {
    let dir = tempfile::tempdir().unwrap();
    let mln = write(dir.path(), "model.mln", SMOKERS);
    let ev = write(dir.path(), "evidence.db", "smokes(Anna)\nsmokes(Bob)\n");
    let out = dir.path().join("map.txt");
    let lp = dir.path().join("final.lp");
    let result = run(&[
        "-i",
        &mln,
        "-e",
        &ev,
        "-o",
        out.to_str().unwrap(),
        "--export-lp",
        lp.to_str().unwrap(),
    ]);
    assert!(result.status.success());
    let text = std::fs::read_to_string(&lp).unwrap();
    // Both groundings are violated at the start, so the final program has
    // one counting constraint (aggregation merges the symmetric pair).
    assert!(text.contains("Subject To\n c0:"));
}

#[test]
fn no_cpa_flag_changes_program_not_answer() {
    let dir = tempfile::tempdir().unwrap();
    let mln = write(dir.path(), "model.mln", SMOKERS);
    let ev = write(dir.path(), "evidence.db", "smokes(Anna)\nsmokes(Bob)\n");

    let out_a = dir.path().join("a.txt");
    let lp_a = dir.path().join("a.lp");
    let run_a = run(&[
        "-i",
        &mln,
        "-e",
        &ev,
        "-o",
        out_a.to_str().unwrap(),
        "--export-lp",
        lp_a.to_str().unwrap(),
    ]);
    assert!(run_a.status.success());

    let out_b = dir.path().join("b.txt");
    let lp_b = dir.path().join("b.lp");
    let run_b = run(&[
        "-i",
        &mln,
        "-e",
        &ev,
        "-o",
        out_b.to_str().unwrap(),
        "--export-lp",
        lp_b.to_str().unwrap(),
        "--no-cpa",
    ]);
    assert!(run_b.status.success());

    assert_eq!(
        std::fs::read_to_string(&out_a).unwrap(),
        std::fs::read_to_string(&out_b).unwrap()
    );
    let lp_plain = std::fs::read_to_string(&lp_b).unwrap();
    let lp_agg = std::fs::read_to_string(&lp_a).unwrap();
    assert!(lp_plain.contains(" c1:"), "expected two rows: {lp_plain}");
    assert!(!lp_agg.contains(" c1:"), "expected one row: {lp_agg}");
}
