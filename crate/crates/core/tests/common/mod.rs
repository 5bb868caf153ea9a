#![allow(dead_code)]

use std::rc::Rc;

use jpa_core::pcf::{parse_term, Term, TermKind};

pub fn numeral(n: u64) -> String {
    let mut s = "zero".to_string();
    for _ in 0..n {
        s = format!("(succ {s})");
    }
    s
}

pub const ADD: &str = "(fix add: nat -> nat -> nat. fun m: nat. fun n: nat. case n (succ (add (pred m) n)) (ifz m))";

pub fn add_source(m: u64, n: u64) -> String {
    format!("{ADD} {} {}", numeral(m), numeral(n))
}

/// Programs whose descriptions together use every formation rule.
pub const CORPUS: &[&str] = &[
    "zero",
    "succ zero",
    "pred (succ (succ zero))",
    "ifz zero",
    "ifz (succ zero)",
    "tt",
    "ff",
    "case zero (succ zero) tt",
    "case zero (succ zero) ff",
    "fun x: nat. x",
    "fun x: nat. succ x",
    "fun x: nat. pred x",
    "fun x: nat. ifz x",
    "fun b: bool. case zero (succ zero) b",
    "fun x: nat. fun y: nat. x",
    "fun x: nat. fun y: nat. y",
    "fun f: nat -> nat. f zero",
    "fun f: nat -> nat. f (f zero)",
    "(fun x: nat. succ x) zero",
    "(fun f: nat -> nat. f zero) (fun x: nat. x)",
    "fst (zero, tt)",
    "snd (zero, tt)",
    "fun p: nat * nat. snd p",
    "fix f: nat. zero",
    "(fix f: nat -> nat. fun m: nat. case zero (succ (f (pred m))) (ifz m)) (succ zero)",
    ADD,
    "fun f: nat -> nat. fun x: nat. case (f x) x (ifz x)",
];

/// Call-by-name big-step values.
#[derive(Clone)]
pub enum Val {
    Nat(u64),
    Bool(bool),
    Pair(Thunk, Thunk),
    Clo(String, Rc<Term>, Env),
}

#[derive(Clone)]
pub struct Thunk(Rc<Term>, Env);

#[derive(Clone, Default)]
pub struct Env(Option<Rc<(String, Thunk, Env)>>);

impl Env {
    fn bind(&self, x: &str, t: Thunk) -> Env {
        Env(Some(Rc::new((x.to_string(), t, self.clone()))))
    }

    fn get(&self, x: &str) -> Option<Thunk> {
        let mut e = self;
        while let Some(c) = &e.0 {
            if c.0 == x {
                return Some(c.1.clone());
            }
            e = &c.2;
        }
        None
    }
}

fn force(t: &Thunk, fuel: &mut u64) -> Option<Val> {
    eval_in(&t.0, &t.1, fuel)
}

fn eval_in(t: &Rc<Term>, env: &Env, fuel: &mut u64) -> Option<Val> {
    *fuel = fuel.checked_sub(1)?;
    let sub = |b: &Term| Rc::new(b.clone());
    match &t.kind {
        TermKind::Var(x) => force(&env.get(x)?, fuel),
        TermKind::Lam(x, _, b) => Some(Val::Clo(x.clone(), sub(b), env.clone())),
        TermKind::App(f, a) => match eval_in(&sub(f), env, fuel)? {
            Val::Clo(x, b, cenv) => eval_in(&b, &cenv.bind(&x, Thunk(sub(a), env.clone())), fuel),
            _ => None,
        },
        TermKind::Pair(a, b) => Some(Val::Pair(Thunk(sub(a), env.clone()), Thunk(sub(b), env.clone()))),
        TermKind::Fst(p) | TermKind::Snd(p) => match eval_in(&sub(p), env, fuel)? {
            Val::Pair(a, b) => force(if matches!(t.kind, TermKind::Fst(_)) { &a } else { &b }, fuel),
            _ => None,
        },
        TermKind::Zero => Some(Val::Nat(0)),
        TermKind::Succ(e) => match eval_in(&sub(e), env, fuel)? {
            Val::Nat(n) => Some(Val::Nat(n + 1)),
            _ => None,
        },
        TermKind::Pred(e) => match eval_in(&sub(e), env, fuel)? {
            Val::Nat(n) => Some(Val::Nat(n.saturating_sub(1))),
            _ => None,
        },
        TermKind::IfZ(e) => match eval_in(&sub(e), env, fuel)? {
            Val::Nat(n) => Some(Val::Bool(n == 0)),
            _ => None,
        },
        TermKind::Case(a, b, c) => match eval_in(&sub(c), env, fuel)? {
            Val::Bool(true) => eval_in(&sub(a), env, fuel),
            Val::Bool(false) => eval_in(&sub(b), env, fuel),
            _ => None,
        },
        TermKind::Fix(x, _, b) => eval_in(&sub(b), &env.bind(x, Thunk(t.clone(), env.clone())), fuel),
        TermKind::Tt => Some(Val::Bool(true)),
        TermKind::Ff => Some(Val::Bool(false)),
    }
}

/// Result of a closed ground program as `nat:n` or `bool:tt`/`bool:ff`.
pub fn big_step(src: &str) -> Option<String> {
    let t = Rc::new(parse_term(src).ok()?);
    match eval_in(&t, &Env::default(), &mut 10_000_000)? {
        Val::Nat(n) => Some(format!("nat:{n}")),
        Val::Bool(b) => Some(format!("bool:{}", if b { "tt" } else { "ff" })),
        _ => None,
    }
}
