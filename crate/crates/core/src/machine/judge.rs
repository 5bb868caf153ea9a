//! Judge: records the play on the tape, consults Opponent, runs the machine and
//! copies its stack back as the next P-move. Also the stand-alone j-stack mode.

use std::collections::{HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::games::{forced_dummy, hide_position, Game, Move, Occ, Pol, Position, Substance};
use crate::pcf::{Desc, Ty};
use crate::strategies::resolve_selector;
use crate::tags::{InnerTag, Letter, OuterTag};

use super::compile::{compile, JpaMachine};
use super::jpa::{dump_stack, StackResult};
use super::tape::JTape;
use super::MachineError;

/// How Opponent chooses external O-moves. Internal O-moves are the Judge's.
#[derive(Clone, Debug)]
pub enum OpponentPolicy {
    /// Asks the codomain question, then asks again after every `yes`.
    NumeralReader,
    /// Asks the codomain question once.
    BooleanReader,
    /// Plays the listed moves in order; justifiers index the full position.
    Scripted(VecDeque<Occ>),
    /// Uniform over legal external O-moves.
    RandomLegal(Box<ChaCha8Rng>),
}

impl OpponentPolicy {
    pub fn random_legal(seed: u64) -> OpponentPolicy {
        OpponentPolicy::RandomLegal(Box::new(ChaCha8Rng::seed_from_u64(seed)))
    }

    pub fn scripted(moves: Vec<Occ>) -> OpponentPolicy {
        OpponentPolicy::Scripted(moves.into())
    }

    fn next(&mut self, g: &Game, s: &Position) -> Option<Occ> {
        match self {
            OpponentPolicy::NumeralReader | OpponentPolicy::BooleanReader => {
                let h = hide_position(g, s);
                let Some(last) = h.pos.last() else {
                    let init = g.extensions(s).into_iter().find(|o| o.just.is_none())?;
                    return Some(init);
                };
                let reads_numeral = matches!(self, OpponentPolicy::NumeralReader);
                if reads_numeral && last.mv.sub == Substance::Yes {
                    let mv = Move::new(Substance::Q, last.mv.inner.clone(), last.mv.outer.clone());
                    return Some(Occ::new(mv, Some(h.orig(h.pos.len() - 1))));
                }
                None
            }
            OpponentPolicy::Scripted(q) => q.pop_front(),
            OpponentPolicy::RandomLegal(rng) => {
                let os: Vec<Occ> = g
                    .extensions(s)
                    .into_iter()
                    .filter(|o| g.label(&o.mv).is_some_and(|l| l.pol == Pol::O && !l.is_internal()))
                    .collect();
                os.choose(rng).cloned()
            }
        }
    }

    fn trusted(&self) -> bool {
        !matches!(self, OpponentPolicy::Scripted(_))
    }
}

/// Tape and stack after one machine run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snapshot {
    /// Length of the odd position the machine ran on.
    pub len: usize,
    pub tape: String,
    pub stack: String,
    pub steps: usize,
}

#[derive(Clone, Debug)]
pub struct PlayTrace {
    pub position: Position,
    pub snapshots: Vec<Snapshot>,
    pub steps: usize,
    /// The step budget ran out before Opponent stopped.
    pub exhausted: bool,
}

impl PlayTrace {
    /// The play as an increasing sequence of positions.
    pub fn positions(&self) -> Vec<Position> {
        (0..=self.position.len()).map(|k| self.position.prefix(k)).collect()
    }
}

#[derive(Clone, Debug, Default)]
pub struct InteractOptions {
    pub budget: usize,
    /// Record tape and stack after every run.
    pub snapshots: bool,
    /// Stop once the position reaches this length.
    pub max_len: Option<usize>,
}

/// Runs the machine against `o` until Opponent stops, the length cap is hit or
/// the step budget runs out.
pub fn interact(m: &JpaMachine, o: &mut OpponentPolicy, opts: &InteractOptions) -> Result<PlayTrace, MachineError> {
    let g = m.game().clone();
    let mut s = Position::empty();
    let mut tape = JTape::new();
    let mut trace = PlayTrace {
        position: Position::empty(),
        snapshots: Vec::new(),
        steps: 0,
        exhausted: false,
    };
    loop {
        if opts.max_len.is_some_and(|k| s.len() >= k) {
            break;
        }
        if s.len().is_multiple_of(2) {
            let next = match forced_dummy(&g, &s) {
                Some(d) => d,
                None => match o.next(&g, &s) {
                    Some(x) => {
                        if !o.trusted() {
                            g.accepts(&s.extended(x.clone()))
                                .map_err(|e| MachineError::Policy(e.to_string()))?;
                        }
                        x
                    }
                    None => break,
                },
            };
            tape.push(&next);
            s.push(next);
            continue;
        }
        let left = opts.budget.saturating_sub(trace.steps);
        let (res, log) = match m.run(&tape, left) {
            Ok(r) => r,
            Err(MachineError::Diverged(_)) => {
                trace.steps = opts.budget;
                trace.exhausted = true;
                break;
            }
            Err(e) => return Err(e),
        };
        trace.steps += log.steps;
        let occ = judge_move(&s, &res)?;
        tape.push(&occ);
        s.push(occ);
        if opts.snapshots {
            trace.snapshots.push(Snapshot {
                len: s.len() - 1,
                tape: JTape::from_position(&s.prefix(s.len() - 1)).serialize(),
                stack: dump_stack(&log.stack),
                steps: log.steps,
            });
        }
    }
    trace.position = s;
    Ok(trace)
}

/// Resolves the selector against the P-view and forms the P-occurrence.
pub fn judge_move(s: &Position, r: &StackResult) -> Result<Occ, MachineError> {
    let j = resolve_selector(s, r.sel).ok_or(MachineError::Selector(r.sel))?;
    Ok(Occ::new(r.mv.clone(), Some(j)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Value {
    Nat(u64),
    Bool(bool),
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Nat(n) => write!(f, "nat:{n}"),
            Value::Bool(b) => write!(f, "bool:{}", if *b { "tt" } else { "ff" }),
        }
    }
}

/// Reads the external play of a closed ground program.
pub fn read_value(g: &Game, s: &Position) -> Option<Value> {
    let h = hide_position(g, s).pos;
    let last = h.last()?;
    match last.mv.sub {
        Substance::No => Some(Value::Nat(
            h.0.iter().filter(|o| o.mv.sub == Substance::Yes).count() as u64
        )),
        Substance::Tt => Some(Value::Bool(true)),
        Substance::Ff => Some(Value::Bool(false)),
        _ => None,
    }
}

/// Evaluates a closed program of type `nat` or `bool`.
pub fn evaluate(d: &Desc, budget: usize) -> Result<Value, MachineError> {
    let m = compile(d)?;
    let mut o = match m.cod {
        Ty::Nat => OpponentPolicy::NumeralReader,
        Ty::Bool => OpponentPolicy::BooleanReader,
        ref t => return Err(MachineError::NotGround(t.clone())),
    };
    let t = interact(
        &m,
        &mut o,
        &InteractOptions {
            budget,
            ..Default::default()
        },
    )?;
    if t.exhausted {
        return Err(MachineError::Diverged(budget));
    }
    read_value(m.game(), &t.position).ok_or_else(|| MachineError::Stuck("play ended without an answer".into()))
}

pub fn evaluate_numeral(d: &Desc, budget: usize) -> Result<u64, MachineError> {
    match evaluate(d, budget)? {
        Value::Nat(n) => Ok(n),
        Value::Bool(_) => Err(MachineError::NotGround(Ty::Bool)),
    }
}

pub fn evaluate_boolean(d: &Desc, budget: usize) -> Result<bool, MachineError> {
    match evaluate(d, budget)? {
        Value::Bool(b) => Ok(b),
        Value::Nat(_) => Err(MachineError::NotGround(Ty::Nat)),
    }
}

/// Arity of `nat -> … -> nat`.
fn first_order_arity(t: &Ty) -> Option<usize> {
    match t {
        Ty::Nat => Some(0),
        Ty::Arrow(a, b) if **a == Ty::Nat => first_order_arity(b).map(|k| k + 1),
        _ => None,
    }
}

/// Stand-alone j-stack evaluation of a closed `nat^k -> nat` description: the play
/// is kept on one edge-equipped stack, the argument numerals are answered by a
/// driver built into this loop, and no Opponent is consulted.
pub fn jsa_standalone_run(d: &Desc, inputs: &[u64], budget: usize) -> Result<u64, MachineError> {
    let m = compile(d)?;
    let k = first_order_arity(&m.cod).filter(|&k| k == inputs.len() && m.dom == Ty::Unit);
    let Some(k) = k else {
        return Err(MachineError::NotGround(m.cod.clone()));
    };
    let result = InnerTag(vec![Letter::E; k + 1]);
    let arg_of = |inner: &InnerTag| -> Option<usize> {
        let (first, rest) = inner.0.split_first()?;
        (*first == Letter::W && rest.iter().all(|l| *l == Letter::E)).then(|| rest.len() - 1)
    };
    let g = m.game().clone();
    let mut jstack = JTape::new();
    let mut s = Position::empty();
    let mut yes_in_thread: HashMap<(usize, OuterTag), u64> = HashMap::new();
    let mut steps = 0;
    let push = |jstack: &mut JTape, s: &mut Position, o: Occ| {
        jstack.push(&o);
        s.push(o);
    };
    loop {
        if s.len() % 2 == 1 {
            let (res, log) = m.run(&jstack, budget.saturating_sub(steps))?;
            steps += log.steps;
            let occ = judge_move(&s, &res)?;
            push(&mut jstack, &mut s, occ);
            continue;
        }
        if let Some(dm) = forced_dummy(&g, &s) {
            push(&mut jstack, &mut s, dm);
            continue;
        }
        let n = s.len();
        let Some(p) = s.last().cloned() else {
            push(
                &mut jstack,
                &mut s,
                Occ::new(Move::new(Substance::QHat, result.clone(), OuterTag::empty()), None),
            );
            continue;
        };
        if p.mv.inner == result {
            match p.mv.sub {
                Substance::Yes => {
                    let q = Move::new(Substance::Q, result.clone(), OuterTag::empty());
                    push(&mut jstack, &mut s, Occ::new(q, Some(n - 1)));
                }
                Substance::No => {
                    return Ok(s
                        .0
                        .iter()
                        .filter(|o| o.mv.inner == result && o.mv.sub == Substance::Yes)
                        .count() as u64)
                }
                _ => return Err(MachineError::Stuck("unexpected result move".into())),
            }
            continue;
        }
        let Some(i) = arg_of(&p.mv.inner) else {
            return Err(MachineError::Stuck(format!("unexpected P-move {}", p.mv)));
        };
        let Some((f, _)) = p.mv.outer.unwrap_group() else {
            return Err(MachineError::Stuck("unthreaded argument move".into()));
        };
        let count = yes_in_thread.entry((i, f)).or_insert(0);
        let sub = if *count < inputs[i] {
            *count += 1;
            Substance::Yes
        } else {
            Substance::No
        };
        push(
            &mut jstack,
            &mut s,
            Occ::new(Move::new(sub, p.mv.inner.clone(), p.mv.outer.clone()), Some(n - 1)),
        );
    }
}
