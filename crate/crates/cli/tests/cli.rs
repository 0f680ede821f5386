mod common;

use std::fs;

use common::{copy_repo, run_cli, seed_dir, synthetic_dir};
use serde_json::Value;

fn repo_arg(path: &std::path::Path) -> &str {
    path.to_str().expect("utf-8 path")
}

#[test]
fn seed_validates_clean() {
    let (code, stdout, stderr) = run_cli(&["--repo", repo_arg(&seed_dir()), "validate"]);
    assert_eq!(code, 0, "{stderr}");
    assert!(String::from_utf8_lossy(&stdout).ends_with("OK\n"));
}

#[test]
fn dangling_relation_exits_one() {
    let repo = copy_repo(&seed_dir());
    let path = repo.path().join("extractions/femmer2017rapid.json");
    let text = fs::read_to_string(&path).unwrap();
    let broken = text.replace("description:containing-subflows", "description:missing");
    assert_ne!(text, broken);
    fs::write(&path, broken).unwrap();

    let (code, stdout, _) = run_cli(&["--repo", repo_arg(repo.path()), "--format", "json", "validate"]);
    assert_eq!(code, 1);
    let report: Value = serde_json::from_slice(&stdout).expect("JSON report");
    assert!(report.to_string().contains("DANGLING_RELATION"), "{report}");
}

#[test]
fn missing_structure_exits_two() {
    let repo = copy_repo(&seed_dir());
    fs::remove_file(repo.path().join("structure.json")).unwrap();
    let (code, _, stderr) = run_cli(&["--repo", repo_arg(repo.path()), "validate"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("structure.json"), "{stderr}");
}

#[test]
fn unparseable_extraction_exits_two() {
    let repo = copy_repo(&seed_dir());
    fs::write(repo.path().join("extractions/broken.json"), b"{\"reference\": 3}").unwrap();
    let (code, _, stderr) = run_cli(&["--repo", repo_arg(repo.path()), "stats"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("broken.json"), "{stderr}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run_cli(&["frobnicate"]).0, 2);
    assert_eq!(run_cli(&["--repo", repo_arg(&seed_dir()), "query", "--aspect", "no-colon"]).0, 2);
    assert_eq!(run_cli(&["--repo", repo_arg(&seed_dir()), "query", "--has-dataset", "maybe"]).0, 2);
}

#[test]
// a filter value outside the vocabulary is a bad argument, like HTTP 400
fn unknown_filter_characteristic_is_a_usage_error() {
    let (code, _, stderr) = run_cli(&["--repo", repo_arg(&seed_dir()), "query", "--scope", "paragraphs"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("paragraphs"), "{stderr}");
}

#[test]
fn fmt_check_reports_without_writing() {
    let repo = copy_repo(&seed_dir());
    let path = repo.path().join("extractions/femmer2017rapid.json");
    let canonical = fs::read(&path).unwrap();
    let value: Value = serde_json::from_slice(&canonical).unwrap();
    let compact = serde_json::to_vec(&value).unwrap();
    fs::write(&path, &compact).unwrap();

    let (code, stdout, _) = run_cli(&["--repo", repo_arg(repo.path()), "fmt", "--check"]);
    assert_eq!(code, 1);
    assert!(String::from_utf8_lossy(&stdout).contains("femmer2017rapid.json"));
    assert_eq!(fs::read(&path).unwrap(), compact, "--check must not write");

    let (code, _, stderr) = run_cli(&["--repo", repo_arg(repo.path()), "fmt"]);
    assert_eq!(code, 0, "{stderr}");
    assert_eq!(fs::read(&path).unwrap(), canonical);
    assert_eq!(run_cli(&["--repo", repo_arg(repo.path()), "fmt", "--check"]).0, 0);
}

#[test]
fn committed_repositories_are_canonical() {
    for root in [seed_dir(), synthetic_dir()] {
        let (code, stdout, _) = run_cli(&["--repo", repo_arg(&root), "fmt", "--check"]);
        assert_eq!(code, 0, "{}: {}", root.display(), String::from_utf8_lossy(&stdout));
    }
}

#[test]
fn exit_check_on_seed_fails_only_coverage() {
    let (code, stdout, _) = run_cli(&["--repo", repo_arg(&seed_dir()), "--format", "json", "exit-check"]);
    assert_eq!(code, 1);
    let report: Value = serde_json::from_slice(&stdout).expect("JSON report");
    let text = report.to_string();
    assert!(text.contains("EC3"), "{text}");
    let (_, stdout, _) = run_cli(&["--repo", repo_arg(&seed_dir()), "exit-check"]);
    let stdout = String::from_utf8_lossy(&stdout);
    for line in stdout.lines().filter(|l| l.trim_start().starts_with("EC")) {
        let failing = line.contains(" fail");
        assert_eq!(failing, line.trim_start().starts_with("EC3"), "{line}");
    }
}

#[test]
fn agreement_of_a_directory_with_itself_is_total() {
    let dir = seed_dir().join("extractions");
    let dir = repo_arg(&dir);
    let (code, stdout, stderr) = run_cli(&["--repo", repo_arg(&seed_dir()), "agreement", dir, dir]);
    assert_eq!(code, 0, "{stderr}");
    assert!(String::from_utf8_lossy(&stdout).contains("agreement=100.00%"));
}

#[test]
fn json_output_is_canonical() {
    let (code, stdout, _) = run_cli(&["--repo", repo_arg(&synthetic_dir()), "--format", "json", "stats"]);
    assert_eq!(code, 0);
    let value: Value = serde_json::from_slice(&stdout).unwrap();
    assert_eq!(stdout, reqont_core::canonical::to_canonical_bytes(&value));
}
