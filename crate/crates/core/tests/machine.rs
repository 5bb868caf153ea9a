mod common;

use jpa_core::machine::{
    compile, evaluate, interact, InteractOptions, JTape, MachineError, OpponentPolicy, DEFAULT_BUDGET,
};
use jpa_core::pcf::{denote_source, Atom, Desc};
use jpa_core::Position;

fn succ_replay(o_moves: &str) -> Position {
    let m = compile(&Desc::atom(Atom::Succ)).unwrap();
    let script = Position::parse_trace(o_moves).unwrap().0;
    let opts = InteractOptions {
        budget: DEFAULT_BUDGET,
        snapshots: true,
        max_len: None,
    };
    let t = interact(&m, &mut OpponentPolicy::scripted(script), &opts).unwrap();
    assert!(!t.exhausted);
    t.position
}

/// Checks that the tape carries exactly one edge per justified occurrence, given as
/// 1-based `(from, to)` occurrence pairs.
fn assert_edges(s: &Position, arrows: &[(usize, usize)]) {
    let tape = JTape::from_position(s);
    assert_eq!(tape.edges.len(), arrows.len());
    for &(i, j) in arrows {
        assert_eq!(
            tape.edges.get(&tape.dollar(i - 1)),
            Some(&tape.dollar(j - 1)),
            "arrow {i} -> {j}"
        );
    }
}

// O-moves carry their full-position index; P-moves are left to the machine.
#[test]
fn successor_of_two_on_tape() {
    let o = "1: qhatE_{} @init\n\
             2: yesW_{[0 ]0 h} @2\n\
             3: qE_{} @4\n\
             4: noW_{[0 ]0 h} @6\n\
             5: qE_{} @8\n";
    let s = succ_replay(&script_with_gaps(o));
    let want = "1: qhatE_{} @init\n\
                2: qhatW_{[0 ]0 h} @1\n\
                3: yesW_{[0 ]0 h} @2\n\
                4: yesE_{} @1\n\
                5: qE_{} @4\n\
                6: qW_{[0 ]0 h} @3\n\
                7: noW_{[0 ]0 h} @6\n\
                8: yesE_{} @5\n\
                9: qE_{} @8\n\
                10: noE_{} @9\n";
    assert_eq!(s, Position::parse_trace(want).unwrap());
    assert_edges(
        &s,
        &[(2, 1), (3, 2), (4, 1), (5, 4), (6, 3), (7, 6), (8, 5), (9, 8), (10, 9)],
    );
}

#[test]
fn successor_of_zero_on_tape() {
    let o = "1: qhatE_{} @init\n\
             2: noW_{[0 ]0 h} @2\n\
             3: qE_{} @4\n";
    let s = succ_replay(&script_with_gaps(o));
    let want = "1: qhatE_{} @init\n\
                2: qhatW_{[0 ]0 h} @1\n\
                3: noW_{[0 ]0 h} @2\n\
                4: yesE_{} @1\n\
                5: qE_{} @4\n\
                6: noE_{} @5\n";
    assert_eq!(s, Position::parse_trace(want).unwrap());
    assert_edges(&s, &[(2, 1), (3, 2), (4, 1), (5, 4), (6, 5)]);
}

/// The scripted policy is fed one O-move per line; `parse_trace` wants consecutive
/// indices, so the lines are renumbered while keeping their justifiers.
fn script_with_gaps(o: &str) -> String {
    o.lines()
        .enumerate()
        .map(|(k, l)| format!("{}:{}\n", k + 1, l.split_once(':').unwrap().1))
        .collect()
}

#[test]
fn runs_are_deterministic() {
    for src in common::CORPUS {
        let (d, _) = denote_source(src).unwrap();
        let a = compile(&d).unwrap();
        let b = compile(&d).unwrap();
        assert_eq!(a.to_string(), b.to_string(), "dump of `{src}`");
        let opts = InteractOptions {
            budget: DEFAULT_BUDGET,
            snapshots: true,
            max_len: Some(16),
        };
        let t1 = interact(&a, &mut OpponentPolicy::random_legal(3), &opts).unwrap();
        let t2 = interact(&b, &mut OpponentPolicy::random_legal(3), &opts).unwrap();
        assert_eq!(t1.position, t2.position);
        for (x, y) in t1.snapshots.iter().zip(&t2.snapshots) {
            assert_eq!((&x.tape, &x.stack, x.steps), (&y.tape, &y.stack, y.steps));
        }
    }
}

#[test]
fn divergence_exhausts_the_budget() {
    let (d, _) = denote_source("fix f: nat. f").unwrap();
    assert!(matches!(evaluate(&d, 10_000), Err(MachineError::Diverged(_))));
}

#[test]
fn evaluation_matches_big_step_on_corpus() {
    for src in common::CORPUS {
        let (d, _) = denote_source(src).unwrap();
        let Some(want) = common::big_step(src) else { continue };
        assert_eq!(evaluate(&d, DEFAULT_BUDGET).unwrap().to_string(), want, "`{src}`");
    }
}

#[test]
fn malformed_tapes_are_rejected() {
    assert!(JTape::parse("TAPE\n|- qhat_E\nEDGES\n").is_err());
    assert!(JTape::parse("STACK\n|-\n").is_err());
    assert!(JTape::parse("TAPE\n|- qhat_E $ qhat_W $\nEDGES 4>9\n").is_err());
}
