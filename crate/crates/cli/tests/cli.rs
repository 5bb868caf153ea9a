use std::io::Write;

use assert_cmd::Command;
use predicates::prelude::*;
use tempfile::NamedTempFile;

fn program(src: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(src.as_bytes()).unwrap();
    f
}

fn jpa() -> Command {
    Command::cargo_bin("jpa").unwrap()
}

fn eval(src: &str) -> assert_cmd::assert::Assert {
    let f = program(src);
    jpa().arg("eval").arg(f.path()).assert()
}

#[test]
fn eval_prints_values() {
    eval("succ (succ zero)").success().stdout("nat:2\n");
    eval("ifz zero").success().stdout("bool:tt\n");
    eval("ifz (succ zero)").success().stdout("bool:ff\n");
    eval("(fun f: nat -> nat. f (f zero)) (fun x: nat. succ x)")
        .success()
        .stdout("nat:2\n");
}

#[test]
fn divergence_exits_2() {
    eval("fix f. f").code(2).stdout("DIVERGED\n");
    eval("fix f: nat. f").code(2).stdout("DIVERGED\n");
}

#[test]
fn input_errors_exit_1_with_location() {
    eval("succ (")
        .code(1)
        .stderr(predicate::str::contains("syntax error at 1:"));
    eval("succ tt")
        .code(1)
        .stderr(predicate::str::contains("type error at 1:"));
    eval("\n  ").code(1).stderr(predicate::str::contains("empty program"));
    eval("fun x: nat. x")
        .code(1)
        .stderr(predicate::str::contains("not nat or bool"));
    jpa().args(["eval", "/nonexistent/prog.pcf"]).assert().code(1);
}

#[test]
fn usage_errors_exit_1() {
    jpa().assert().code(1);
    jpa().args(["verify", "--suite", "nonsense"]).assert().code(1);
    jpa().args(["eval"]).assert().code(1);
}

#[test]
fn trace_interleaves_tapes_and_stacks() {
    let f = program("succ zero");
    let out = jpa()
        .arg("trace")
        .arg(f.path())
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let out = String::from_utf8(out).unwrap();
    let moves: Vec<&str> = out
        .lines()
        .filter(|l| l.split(':').next().is_some_and(|k| k.parse::<usize>().is_ok()))
        .collect();
    assert_eq!(
        moves,
        [
            "1: qhatE_{} @init",
            "2: qhatWN_{[0 ]0 h} @1",
            "3: qhatES_{[0 ]0 h} @2",
            "4: noES_{[0 ]0 h} @3",
            "5: noWN_{[0 ]0 h} @2",
            "6: yesE_{} @1",
            "7: qE_{} @6",
            "8: noE_{} @7",
        ]
    );
    assert_eq!(out.matches("TAPE\n").count(), 4);
    assert_eq!(out.matches("STACK\n").count(), 4);
    assert!(out.contains("EDGES 7>2 12>7\n"));
    assert!(!out.contains("TRUNCATED"));
}

#[test]
fn trace_truncates_at_the_step_limit() {
    let f = program("succ zero");
    jpa()
        .args(["trace", "--max-steps", "3"])
        .arg(f.path())
        .assert()
        .success()
        .stdout(predicate::str::contains("TRUNCATED"));
}

#[test]
fn trace_rejects_empty_programs() {
    let f = program("");
    jpa()
        .arg("trace")
        .arg(f.path())
        .assert()
        .code(1)
        .stderr(predicate::str::contains("empty program"));
}

#[test]
fn dump_is_deterministic() {
    let f = program("fix f. succ f");
    let a = jpa()
        .arg("dump")
        .arg(f.path())
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let b = jpa()
        .arg("dump")
        .arg(f.path())
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.contains("fix[nat]"));
    assert!(text.contains("succ"));
    let z = program("zero");
    jpa()
        .arg("dump")
        .arg(z.path())
        .assert()
        .success()
        .stdout(predicate::str::contains("MACHINE unit -> nat").and(predicate::str::contains("zero")));
}

#[test]
fn verify_suites_pass() {
    for args in [
        vec!["--suite", "tags"],
        vec!["--suite", "games", "--depth", "6"],
        vec!["--suite", "machine", "--depth", "24", "--seeds", "100"],
        vec!["--suite", "pcf", "--depth", "16"],
    ] {
        jpa()
            .arg("verify")
            .args(&args)
            .assert()
            .success()
            .stdout(predicate::str::contains("PASS").and(predicate::str::contains("seed 0")));
    }
}
