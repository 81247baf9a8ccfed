use std::path::Path;
use std::process::{Command, Output, Stdio};
use std::io::Write;

use rach_core::verifier::CounterexampleTrace;

fn rach(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rach")).args(args).env_remove("RACH_TT_DIR").output().unwrap()
}

fn rach_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rach")).args(args).env("RACH_TT_DIR", dir).output().unwrap()
}

fn rach_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_rach"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn first_line(o: &Output) -> String {
    stdout(o).lines().next().unwrap_or_default().to_string()
}

#[test]
fn solve_prints_the_outcome() {
    for (p, b, want) in [("2K2", "K5", "FirstWin"), ("K2", "K2", "FirstWin"), ("2K2", "K4", "Draw")] {
        let o = rach(&["solve", "--pattern", p, "--board", b]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(first_line(&o), format!("outcome={want}"), "{p} on {b}");
    }
}

#[test]
fn number_prints_the_threshold() {
    let cases = [
        (["--pattern", "3K2", "--family", "complete", "--max-n", "8"], "6"),
        (["--pattern", "4K2", "--family", "square", "--max-n", "6"], "4"),
        // Path on five vertices: already a first-player win on K3,3.
        (["--pattern", "P5", "--family", "square", "--max-n", "6"], "3"),
    ];
    for (args, want) in cases {
        let mut full = vec!["number"];
        full.extend(args);
        let o = rach(&full);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(first_line(&o), want, "{args:?}");
    }
}

#[test]
fn number_reports_no_win_in_range() {
    let o = rach(&["number", "--pattern", "3K2", "--family", "complete", "--max-n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(first_line(&o), "none<=5");
}

#[test]
fn exit_codes() {
    assert_eq!(rach(&["solve", "--pattern", "3K2", "--board", "K6", "--budget-nodes", "3"]).status.code(), Some(3));
    assert_eq!(rach(&["solve", "--pattern", "Q7", "--board", "K6"]).status.code(), Some(4));
    assert_eq!(rach(&["solve", "--pattern", "K2", "--board", "L6"]).status.code(), Some(4));
    assert_eq!(rach(&["solve", "--pattern", "K2", "--board", "K12"]).status.code(), Some(4));
    assert_eq!(rach(&["frobnicate"]).status.code(), Some(4));
    assert_eq!(rach(&["verify", "--strategy", "NOPE", "--pattern", "K2", "--board", "K2"]).status.code(), Some(4));
    assert_eq!(rach(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_certifies_catalog_claims() {
    let o = rach(&["verify", "--strategy", "BOB_STAR_BLOCK_COMPLETE", "--pattern", "K1,3", "--board", "K4", "--mode", "strict"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(first_line(&o).starts_with("certified BOB_STAR_BLOCK_COMPLETE"));
    let o = rach(&["verify", "--strategy", "ALICE_STAR4_55", "--pattern", "K1,4", "--board", "K5,5"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn verify_rejects_out_of_domain_claims_unless_forced() {
    let args = ["verify", "--strategy", "BOB_STAR_BLOCK_COMPLETE", "--pattern", "2K2", "--board", "K5", "--mode", "strict"];
    assert_eq!(rach(&args).status.code(), Some(4));

    let dir = tempfile::tempdir().unwrap();
    let trace_path = dir.path().join("neg.trace");
    let mut forced = args.to_vec();
    let trace_arg = trace_path.to_str().unwrap();
    forced.extend(["--force", "--trace-out", trace_arg]);
    let o = rach(&forced);
    assert_eq!(o.status.code(), Some(2));
    let text = std::fs::read_to_string(&trace_path).unwrap();
    let trace = CounterexampleTrace::parse(&text).unwrap();
    assert_eq!(trace.replay().unwrap(), trace.result);
}

#[test]
fn refuting_trace_goes_to_stdout_without_a_path() {
    let o = rach(&["verify", "--strategy", "BOB_DEGREE_MIRROR", "--pattern", "S2,1", "--board", "K4,3"]);
    assert_eq!(o.status.code(), Some(2));
    let trace = CounterexampleTrace::parse(&stdout(&o)).unwrap();
    assert_eq!(trace.replay().unwrap(), trace.result);
}

#[test]
fn complete_board_table_agrees_and_skips_large_rows() {
    let o = rach(&["table", "--which", "thm1.2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for label in ["K2 ", "P3 ", "2K2 ", "P4 ", "K1,3 ", "K3 ", "C4 "] {
        let line = out.lines().find(|l| l.starts_with(label)).unwrap();
        assert!(line.ends_with("agree"), "{line}");
    }
    for label in ["K4-e ", "K4 "] {
        let line = out.lines().find(|l| l.starts_with(label)).unwrap();
        assert!(line.contains("SKIPPED("), "{line}");
    }
}

#[test]
fn corrected_table_shows_the_new_star_value() {
    let o = rach(&["table", "--which", "corrected"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let line = out.lines().find(|l| l.starts_with("K1,4 ")).unwrap();
    let fields: Vec<&str> = line.split_whitespace().collect();
    assert_eq!(fields[1], "5");
    assert_eq!(fields[3], "5");
}

#[test]
fn bipartite_table_rows() {
    let o = rach(&["table", "--which", "thm1.3"]);
    let out = stdout(&o);
    let row = |label: &str| out.lines().find(|l| l.starts_with(label)).unwrap().to_string();
    assert!(row("2K2 ").ends_with("agree"));
    assert!(row("K1,4 ").contains("superseded"));
    // The five-vertex path disagrees with the older table (3, not 4).
    assert!(row("P5 ").contains("DISAGREE"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn outputs_are_reproducible() {
    let a = rach(&["table", "--which", "thm1.2"]);
    let b = rach(&["table", "--which", "thm1.2"]);
    assert_eq!(a.stdout, b.stdout);
    let a = rach(&["solve", "--pattern", "C4", "--board", "K5"]);
    let b = rach(&["solve", "--pattern", "C4", "--board", "K5"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn cache_directory_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let first = rach_in(dir.path(), &["solve", "--pattern", "K1,3", "--board", "K3,3"]);
    assert_eq!(first_line(&first), "outcome=Draw");
    let list = rach_in(dir.path(), &["cache", "list"]);
    assert!(stdout(&list).contains("K1_3__K3x3.rtt"), "{}", stdout(&list));
    let second = rach_in(dir.path(), &["solve", "--pattern", "K1,3", "--board", "K3,3"]);
    assert_eq!(first_line(&second), "outcome=Draw");
    assert!(stdout(&second).contains("nodes=0 table_hits=1"), "{}", stdout(&second));
    let clear = rach_in(dir.path(), &["cache", "clear"]);
    assert_eq!(first_line(&clear), "removed 1 table file(s)");
    assert_eq!(rach(&["cache", "list"]).status.code(), Some(4));
}

#[test]
fn explicit_table_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sub").join("c4.rtt");
    let p = path.to_str().unwrap();
    let o = rach(&["solve", "--pattern", "C4", "--board", "K5", "--tt-file", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(path.exists());
    // A table for another game is bad input.
    let o = rach(&["solve", "--pattern", "P4", "--board", "K5", "--tt-file", p]);
    assert_eq!(o.status.code(), Some(4));
}

/// Every edge of `K_n` as input lines; colored ones are re-prompted.
fn all_edges(n: usize) -> String {
    let mut s = String::new();
    for a in 0..n {
        for b in a + 1..n {
            s.push_str(&format!("{a} {b}\n"));
        }
    }
    s
}

#[test]
fn human_bob_loses_to_the_matching_strategy_within_five_rounds() {
    let o = rach_stdin(
        &["play", "--pattern", "3K2", "--board", "K6", "--human", "bob", "--engine", "strategy:ALICE_MATCHING_COMPLETE"],
        &all_edges(6),
    );
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("result FirstWin"), "{out}");
    let alice_moves = out.lines().filter(|l| l.starts_with(',') && l.contains(" A ")).count();
    assert!(alice_moves <= 5, "{out}");
}

#[test]
fn human_alice_cannot_beat_the_solver_on_k4() {
    let o = rach_stdin(&["play", "--pattern", "2K2", "--board", "K4", "--human", "alice", "--engine", "solver"], &all_edges(4));
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("result ") && !out.contains("result FirstWin"), "{out}");
}

#[test]
fn illegal_moves_are_reprompted() {
    let o = rach_stdin(
        &["play", "--pattern", "2K2", "--board", "K4", "--human", "alice", "--engine", "solver"],
        &format!("0 1\n0 1\n9 9\nnonsense\n{}", all_edges(4)),
    );
    let out = stdout(&o);
    assert!(out.matches("illegal move").count() >= 3, "{out}");
}

#[test]
fn play_rejects_an_engine_on_the_human_side() {
    let o = rach_stdin(
        &["play", "--pattern", "3K2", "--board", "K6", "--human", "alice", "--engine", "strategy:ALICE_MATCHING_COMPLETE"],
        "",
    );
    assert_eq!(o.status.code(), Some(4));
}
