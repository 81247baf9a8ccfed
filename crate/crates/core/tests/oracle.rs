mod common;

use std::sync::Arc;

use common::Naive;
use rach_core::{achievement_number, parse_pattern, solve, BoardFamily, Board, Coloring, Limits, Outcome, Solver, Symmetry};

fn outcome(v: i8) -> Outcome {
    match v {
        1 => Outcome::FirstWin,
        0 => Outcome::Draw,
        _ => Outcome::SecondWin,
    }
}

fn agree_on_every_position(pattern: &str, board: &str, symmetry: Symmetry) -> usize {
    let p = parse_pattern(pattern).unwrap();
    let b: Board = board.parse().unwrap();
    let mut naive = Naive::new(&b, &p);
    let mut solver = Solver::with_symmetry(Arc::new(p.clone()), Arc::new(b.clone()), Limits::default(), symmetry).unwrap();
    let positions = naive.reachable();
    for &c in &positions {
        let want = outcome(naive.value(c));
        let got = solver.value(c).unwrap();
        assert_eq!(got, want, "{pattern} on {board}, blue {:#x} red {:#x}", c.blue, c.red);
    }
    positions.len()
}

#[test]
fn memoized_solver_matches_naive_minimax() {
    for (p, b) in [("2K2", "K4"), ("K2", "K3"), ("2K2", "K3,3"), ("P3", "K2,2")] {
        let n = agree_on_every_position(p, b, Symmetry::Canonical);
        assert!(n > 1, "{p} on {b}");
    }
}

#[test]
fn raw_and_canonical_tables_agree() {
    for (p, b) in [("P3", "K4"), ("K1,3", "K4"), ("2K2", "K5"), ("P4", "K2,3"), ("P4", "K3,3"), ("C4", "K3,3")] {
        let p = parse_pattern(p).unwrap();
        let b: Board = b.parse().unwrap();
        let raw = Solver::with_symmetry(Arc::new(p.clone()), Arc::new(b.clone()), Limits::default(), Symmetry::Raw)
            .unwrap()
            .solve()
            .unwrap();
        let (canon, _) = solve(&p, &b, Limits::default()).unwrap();
        assert_eq!(raw, canon, "{p} on {b}");
    }
}

#[test]
fn raw_symmetry_matches_naive_on_small_boards() {
    agree_on_every_position("P3", "K2,2", Symmetry::Raw);
    agree_on_every_position("2K2", "K4", Symmetry::Raw);
}

#[test]
fn k4_matching_game_is_a_draw_by_exhaustion() {
    let p = parse_pattern("2K2").unwrap();
    let b = Board::complete(4).unwrap();
    assert_eq!(Naive::new(&b, &p).value(Coloring::default()), 0);
    assert_eq!(solve(&p, &b, Limits::default()).unwrap().0, Outcome::Draw);
}

fn number(p: &str, family: BoardFamily) -> usize {
    achievement_number(&parse_pattern(p).unwrap(), family, 6, Limits::default()).unwrap()
}

#[test]
fn spanning_subgraphs_have_no_larger_threshold() {
    for (h, f) in [("P4", "C4"), ("2K2", "C4"), ("2K2", "P4"), ("P3", "K3"), ("edges:(0,1)(2,3)(1,2)", "edges:(0,1)(1,2)(0,2)(2,3)")] {
        assert!(number(h, BoardFamily::Complete) <= number(f, BoardFamily::Complete), "{h} vs {f}");
    }
    for (h, f) in [("P4", "C4"), ("2K2", "C4"), ("2K2", "P4"), ("K1,2+K2", "P5")] {
        assert!(number(h, BoardFamily::SquareBipartite) <= number(f, BoardFamily::SquareBipartite), "{h} vs {f}");
    }
}

#[test]
fn threshold_at_least_pattern_order() {
    for p in ["K2", "P3", "2K2", "P4", "K1,3", "K3", "C4"] {
        let order = parse_pattern(p).unwrap().vertex_count();
        assert!(number(p, BoardFamily::Complete) >= order, "{p}");
    }
}

#[test]
fn board_too_small_for_the_pattern_is_a_draw() {
    for (p, b) in [("K3", "K2"), ("P5", "K2,2"), ("3K2", "K5"), ("K1,4", "K3,3")] {
        let p = parse_pattern(p).unwrap();
        let b: Board = b.parse().unwrap();
        assert_eq!(solve(&p, &b, Limits::default()).unwrap().0, Outcome::Draw, "{p} on {b}");
    }
}

#[test]
fn disputed_thresholds_match_naive_minimax() {
    // Five-vertex path: already a first-player win on K3,3.
    let p5 = parse_pattern("P5").unwrap();
    let k33 = Board::bipartite(3, 3).unwrap();
    assert_eq!(Naive::new(&k33, &p5).value(Coloring::default()), 1);
    assert_eq!(solve(&p5, &k33, Limits::default()).unwrap().0, Outcome::FirstWin);
    // K4 minus an edge: a draw on K5.
    let k4e = parse_pattern("K4-e").unwrap();
    let k5 = Board::complete(5).unwrap();
    assert_eq!(Naive::new(&k5, &k4e).value(Coloring::default()), 0);
    assert_eq!(solve(&k4e, &k5, Limits::default()).unwrap().0, Outcome::Draw);
    // ... and a first-player win on K6.
    let k6 = Board::complete(6).unwrap();
    assert_eq!(Naive::new(&k6, &k4e).value(Coloring::default()), 1);
}
