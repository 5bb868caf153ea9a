//! The j-pushdown automaton interpreter: a leftward, edge-jumping tape head, a
//! push-only stack and the compiled decision tree as control.

use std::collections::VecDeque;

use crate::games::{Move, Position};
use crate::strategies::Selector;
use crate::tags::{OuterTag, TagToken};

use super::compile::{Decision, JpaMachine};
use super::tape::{JTape, Sym};
use super::MachineError;

pub const DEFAULT_BUDGET: usize = 1_000_000;

/// The P-move and selector left on the stack.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackResult {
    pub sel: Selector,
    pub mv: Move,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Motion {
    Left,
    Jump,
    Stay,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Phase {
    /// Reading the view: completed blocks, and the block being read.
    Reading {
        blocks: Vec<Move>,
        partial: Partial,
    },
    Emitting(VecDeque<Sym>),
    Halted,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Partial {
    /// `$` cell of the block.
    pub dollar: usize,
    pub elem: Option<Sym>,
    pub tags: Vec<TagToken>,
    /// Groups still to read, once the element is known.
    pub groups_left: usize,
    pub depth: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub phase: Phase,
    pub head: usize,
    pub stack: Vec<Sym>,
    pub steps: usize,
}

impl Config {
    pub fn initial(tape: &JTape) -> Result<Config, MachineError> {
        let d = tape
            .rightmost_dollar()
            .ok_or_else(|| MachineError::BadTape("empty tape".into()))?;
        Ok(Config {
            phase: Phase::Reading {
                blocks: Vec::new(),
                partial: Partial {
                    dollar: d,
                    ..Partial::default()
                },
            },
            head: d,
            stack: vec![Sym::Start],
            steps: 0,
        })
    }

    pub fn is_halted(&self) -> bool {
        self.phase == Phase::Halted
    }
}

/// What a run did besides producing its result.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunLog {
    pub steps: usize,
    /// `$` cells visited, in order.
    pub dollars: Vec<usize>,
    pub stack: Vec<Sym>,
}

impl JpaMachine {
    /// One transition. The interpreter, not the control, enforces leftward motion
    /// and jumping at non-initial O-blocks.
    pub fn step(&self, c: &Config, tape: &JTape) -> Result<(Config, Motion), MachineError> {
        let mut next = c.clone();
        next.steps += 1;
        let motion = match &mut next.phase {
            Phase::Halted => return Err(MachineError::Stuck("step after halt".into())),
            Phase::Emitting(queue) => {
                match queue.pop_front() {
                    Some(sym) => next.stack.push(sym),
                    None => return Err(MachineError::Stuck("empty emission".into())),
                }
                if queue.is_empty() {
                    next.phase = Phase::Halted;
                }
                Motion::Stay
            }
            Phase::Reading { partial, .. } => {
                let sym = tape
                    .cells
                    .get(c.head)
                    .ok_or_else(|| MachineError::Stuck("head off tape".into()))?;
                match sym {
                    Sym::Dollar if partial.elem.is_none() && c.head == partial.dollar => Motion::Left,
                    Sym::Elem(sub, inner) if partial.elem.is_none() => {
                        let m = Move::new(*sub, inner.clone(), OuterTag::empty());
                        let groups = self
                            .game()
                            .tag_groups(&m)
                            .ok_or_else(|| MachineError::Stuck(format!("symbol {sym} outside the arena")))?;
                        partial.elem = Some(sym.clone());
                        partial.groups_left = groups;
                        self.after_symbol(&mut next, tape)?
                    }
                    Sym::Tag(t) if partial.elem.is_some() && partial.groups_left > 0 => {
                        partial.tags.push(*t);
                        match t {
                            TagToken::Open(_) => partial.depth += 1,
                            TagToken::Close(_) => partial.depth -= 1,
                            TagToken::H
                                if partial.depth == 0
                                    && matches!(partial.tags.iter().rev().nth(1), Some(TagToken::Close(0))) =>
                            {
                                partial.groups_left -= 1;
                            }
                            _ => {}
                        }
                        self.after_symbol(&mut next, tape)?
                    }
                    other => {
                        return Err(MachineError::Stuck(format!(
                            "unexpected symbol {other} at cell {}",
                            c.head
                        )))
                    }
                }
            }
        };
        match motion {
            Motion::Left => {
                next.head = next
                    .head
                    .checked_sub(1)
                    .ok_or_else(|| MachineError::Discipline("moved past |-".into()))?;
            }
            Motion::Jump => {
                let Phase::Reading { partial, .. } = &c.phase else {
                    unreachable!()
                };
                let target = *tape
                    .edges
                    .get(&partial.dollar)
                    .ok_or_else(|| MachineError::Discipline("jump without an edge".into()))?;
                next.head = target;
                if let Phase::Reading { partial, .. } = &mut next.phase {
                    *partial = Partial {
                        dollar: target,
                        ..Partial::default()
                    };
                }
            }
            Motion::Stay => {}
        }
        Ok((next, motion))
    }

    /// Called after reading a symbol of the current block: either continue left,
    /// or finish the block and decide.
    fn after_symbol(&self, next: &mut Config, tape: &JTape) -> Result<Motion, MachineError> {
        let Phase::Reading { blocks, partial } = &mut next.phase else {
            unreachable!()
        };
        if partial.groups_left > 0 {
            return Ok(Motion::Left);
        }
        let Some(Sym::Elem(sub, inner)) = partial.elem.clone() else {
            unreachable!()
        };
        let mv = Move::new(sub, inner, OuterTag(partial.tags.clone()));
        let is_o = blocks.len() % 2 == 0;
        let has_edge = tape.edges.contains_key(&partial.dollar);
        blocks.push(mv);
        let complete = is_o && !has_edge;
        match self.decide(blocks, complete) {
            Decision::Done(sel, p) => {
                let mut q = VecDeque::new();
                q.push_back(Sym::Sel(sel));
                q.push_back(Sym::Elem(p.sub, p.inner.clone()));
                q.extend(p.outer.0.iter().map(|&t| Sym::Tag(t)));
                q.push_back(Sym::Dollar);
                next.phase = Phase::Emitting(q);
                Ok(Motion::Stay)
            }
            Decision::More if complete => Err(MachineError::Stuck("view exhausted without a decision".into())),
            Decision::More if is_o => Ok(Motion::Jump),
            Decision::More => {
                let d = next
                    .head
                    .checked_sub(1)
                    .ok_or_else(|| MachineError::Discipline("moved past |-".into()))?;
                next.head = d;
                if let Phase::Reading { partial, .. } = &mut next.phase {
                    *partial = Partial {
                        dollar: d,
                        ..Partial::default()
                    };
                }
                Ok(Motion::Stay)
            }
            Decision::Stuck(why) => Err(MachineError::Stuck(why)),
        }
    }

    /// Runs on `tape` (an odd-length position) within `budget` steps.
    pub fn run(&self, tape: &JTape, budget: usize) -> Result<(StackResult, RunLog), MachineError> {
        let mut c = Config::initial(tape)?;
        let mut log = RunLog::default();
        let mut last_dollar = None;
        while !c.is_halted() {
            if c.steps >= budget {
                return Err(MachineError::Diverged(budget));
            }
            if let Phase::Reading { partial, .. } = &c.phase {
                if last_dollar != Some(partial.dollar) {
                    log.dollars.push(partial.dollar);
                    last_dollar = Some(partial.dollar);
                }
            }
            let before = c.head;
            let len = c.stack.len();
            let (n, _) = self.step(&c, tape)?;
            if n.head > before {
                return Err(MachineError::Discipline("head moved right".into()));
            }
            if n.stack.len() < len || n.stack[..len] != c.stack[..] {
                return Err(MachineError::Discipline("stack shrank or was rewritten".into()));
            }
            c = n;
        }
        log.steps = c.steps;
        log.stack = c.stack.clone();
        Ok((decode_stack(&c.stack)?, log))
    }

    /// Every configuration of a run, for determinism checks.
    pub fn run_configs(&self, tape: &JTape, budget: usize) -> Result<Vec<Config>, MachineError> {
        let mut c = Config::initial(tape)?;
        let mut out = vec![c.clone()];
        while !c.is_halted() && c.steps < budget {
            c = self.step(&c, tape)?.0;
            out.push(c.clone());
        }
        Ok(out)
    }
}

/// Reads `⊢ J p e₁ … e_k $`.
pub fn decode_stack(stack: &[Sym]) -> Result<StackResult, MachineError> {
    let bad = |m: &str| MachineError::BadStack(m.to_string());
    let [Sym::Start, Sym::Sel(sel), Sym::Elem(sub, inner), rest @ .., Sym::Dollar] = stack else {
        return Err(bad("expected |- J p tags $"));
    };
    let tags = rest
        .iter()
        .map(|s| match s {
            Sym::Tag(t) => Ok(*t),
            _ => Err(bad("non-tag symbol inside the move")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let outer = OuterTag(tags);
    if !outer.is_wellformed() {
        return Err(bad("ill-formed tag"));
    }
    Ok(StackResult {
        sel: *sel,
        mv: Move::new(*sub, inner.clone(), outer),
    })
}

pub fn dump_stack(stack: &[Sym]) -> String {
    let syms: Vec<String> = stack.iter().map(|s| s.to_string()).collect();
    format!("STACK\n{}\n", syms.join(" "))
}

/// `$` cells of the P-view of the position on `tape`.
pub fn p_view_dollars(tape: &JTape, s: &Position) -> Vec<usize> {
    s.p_view_indices().into_iter().map(|i| tape.dollar(i)).collect()
}
