//! End-to-end checks of the binary: output shapes and the exit-code contract
//! (0 success, 1 usage/parse, 2 verification mismatch, 3 resource limit).

use std::path::Path;
use std::process::{Command, Output};

fn wordshuffle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wordshuffle"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn size_reports_the_disjoint_pair() {
    let output = wordshuffle(&["size", "ab", "cd"]);
    assert!(output.status.success(), "{}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("nfa_states: 9"));
    assert!(text.contains("minimal_dfa_states: 9"));
}

#[test]
fn size_predicts_the_periodic_example() {
    let output = wordshuffle(&["size", "bc(abc)^2", "abc", "--predict"]);
    assert!(output.status.success(), "{}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("minimal_dfa_states: 27"), "{text}");
    assert!(text.contains("= 27 (ok)"), "{text}");
}

#[test]
fn size_rejects_empty_words_with_exit_one() {
    let output = wordshuffle(&["size", "a", ""]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("non-empty"));
}

#[test]
fn parse_errors_carry_positions_and_exit_one() {
    let output = wordshuffle(&["size", "a(bc", "a"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("position 1"), "{}", stderr(&output));
}

#[test]
fn unknown_verify_scope_exits_one() {
    let output = wordshuffle(&["verify", "lemma9"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn verify_lemma4_small_range_passes() {
    let output = wordshuffle(&["verify", "lemma4", "--wlen", "2..2", "--reps", "0..2"]);
    assert!(output.status.success(), "{}", stderr(&output));
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(report["schema"], "wordshuffle/verify-v1");
    assert_eq!(report["failures"], 0);
    assert!(report["checks"].as_u64().unwrap() > 0);
}

#[test]
fn verify_eq1_passes() {
    let output = wordshuffle(&["verify", "eq1", "--maxlen", "4", "--alphabet", "ab"]);
    assert!(output.status.success(), "{}", stderr(&output));
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(report["failures"], 0);
}

#[test]
fn verify_thm3_reports_the_bounds() {
    let output = wordshuffle(&["verify", "thm3", "--nmax", "1"]);
    assert!(output.status.success(), "{}", stderr(&output));
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(report["failures"], 0);
    let text = stdout(&output);
    assert!(text.contains("bound 65"), "{text}");
}

#[test]
fn areas_lists_the_example_pair() {
    let output = wordshuffle(&["areas", "bbaa", "aab"]);
    assert!(output.status.success());
    assert_eq!(stdout(&output), "(a,(2,3),(0,1))\n(b,(4,1),(2,0))\n");
}

#[test]
fn export_dot_writes_a_graph() {
    let dir = std::env::temp_dir().join(format!("wordshuffle-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("nfa.dot");
    let output = wordshuffle(&[
        "export",
        "bbaa",
        "aab",
        "--format",
        "dot",
        "--areas",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{}", stderr(&output));
    let dot = std::fs::read_to_string(&path).unwrap();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("fillcolor=gray85"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn export_dot_bullets_probe_states() {
    let output = wordshuffle(&["export", "bbaa", "aab", "--format", "dot", "--probe", "ab"]);
    assert!(output.status.success(), "{}", stderr(&output));
    let dot = stdout(&output);
    // The initial state is active before any letter is read.
    assert!(dot.contains("(4,3)\\n•"), "{dot}");
}

#[test]
fn export_to_unwritable_path_exits_one() {
    let output = wordshuffle(&[
        "export",
        "a",
        "b",
        "--format",
        "json",
        "--out",
        "/nonexistent-dir/out.json",
    ]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn export_json_is_schema_tagged_and_deterministic() {
    let first = wordshuffle(&["export", "a", "b", "--format", "json"]);
    assert!(first.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    assert_eq!(doc["schema"], "wordshuffle/nfa-v1");
    let second = wordshuffle(&["export", "a", "b", "--format", "json"]);
    assert_eq!(stdout(&first), stdout(&second));
}

#[test]
fn family_words_and_probe() {
    let output = wordshuffle(&["family", "words", "--n", "1"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("u: aabbaabbaabbaabbaaaaa"));
    assert!(text.contains("v: aabbaabababbaabbbbbbb"));

    let output = wordshuffle(&["family", "probe", "--n", "2", "--choices", "101"]);
    assert!(output.status.success());
    assert_eq!(stdout(&output).trim().len(), 58);

    let output = wordshuffle(&["family", "probe", "--n", "2", "--choices", "10"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn family_experiment_emits_csv_and_hits_caps_with_exit_three() {
    let output = wordshuffle(&["family", "experiment", "--nmax", "1"]);
    assert!(output.status.success(), "{}", stderr(&output));
    let text = stdout(&output);
    assert!(text.starts_with(
        "n,family,u_len,v_len,nfa,subset_dfa,minimal_dfa,predicted_or_bound,wall_time_ms"
    ));
    assert_eq!(text.lines().count(), 3);

    // A tiny cap forces the resource-limit exit while still emitting rows.
    let output = wordshuffle(&["family", "experiment", "--nmax", "1", "--subset-cap", "4"]);
    assert_eq!(output.status.code(), Some(3));
    assert!(stdout(&output).lines().count() >= 3, "partial CSV preserved");
}

#[test]
fn oracle_check_agrees_and_enum_cap_is_loud() {
    let output = wordshuffle(&["oracle-check", "abab", "bba", "--samples", "25"]);
    assert!(output.status.success(), "{}", stderr(&output));
    assert!(stdout(&output).contains("agree"));

    // The environment override shrinks the enumeration cap: exit 3.
    let output = Command::new(env!("CARGO_BIN_EXE_wordshuffle"))
        .args(["oracle-check", "abab", "bba"])
        .env("WORDSHUFFLE_ENUM_CAP", "5")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn build_and_minimize_summaries() {
    let output = wordshuffle(&["build", "bbaa", "aab"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("states: 20"));
    assert!(text.contains("nondeterministic areas: 2"));

    let output = wordshuffle(&["minimize", "bc(abc)^2", "abc"]);
    assert!(output.status.success());
    assert!(stdout(&output).contains("states: 27"));
}

#[test]
fn help_paths_do_not_touch_the_filesystem() {
    assert!(wordshuffle(&["--help"]).status.success());
    assert!(!Path::new("out.json").exists());
}
