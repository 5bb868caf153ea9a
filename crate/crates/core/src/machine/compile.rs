//! Compilation of DPCF descriptions into the decision tree that drives a JPA.
//!
//! Each node consumes the P-view blocks read so far (last O-move first) and
//! either asks for one more block or fixes the selector and the P-move.

use std::fmt;

use crate::constructions::{concatenate_games, curry_game, exponential, pair_games, peel, promote_game, unpeel, Side};
use crate::games::{Game, Move, Substance};
use crate::pcf::{signature, Atom, Desc, DpcfError, Ty};
use crate::strategies::Selector;
use crate::tags::{InnerTag, Letter, OuterTag, TagToken};

use Letter::{E, W};
use Substance::{No, QHat, Yes, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    More,
    Done(Selector, Move),
    Stuck(String),
}

pub(crate) enum NodeKind {
    Atom(Atom, Option<Game>),
    Concat(Box<Node>, Box<Node>),
    Pair(Box<Node>, Box<Node>),
    Promote(Box<Node>),
    Curry(Box<Node>),
}

pub(crate) struct Node {
    pub game: Game,
    pub kind: NodeKind,
}

/// A compiled machine: the decision tree plus the game it plays on.
pub struct JpaMachine {
    pub(crate) root: Node,
    pub desc: Desc,
    pub dom: Ty,
    pub cod: Ty,
}

impl JpaMachine {
    pub fn game(&self) -> &Game {
        &self.root.game
    }

    /// Number of decision nodes.
    pub fn states(&self) -> usize {
        fn count(n: &Node) -> usize {
            1 + match &n.kind {
                NodeKind::Atom(..) => 0,
                NodeKind::Concat(a, b) | NodeKind::Pair(a, b) => count(a) + count(b),
                NodeKind::Promote(c) | NodeKind::Curry(c) => count(c),
            }
        }
        count(&self.root)
    }

    pub(crate) fn decide(&self, blocks: &[Move], complete: bool) -> Decision {
        decide(&self.root, blocks, complete)
    }
}

pub fn compile(d: &Desc) -> Result<JpaMachine, DpcfError> {
    let (dom, cod) = signature(d)?;
    Ok(JpaMachine {
        root: node(d),
        desc: d.clone(),
        dom,
        cod,
    })
}

fn node(d: &Desc) -> Node {
    match d {
        Desc::Atomic(a) => {
            let param = match a {
                Atom::Case(t) | Atom::Fix(t) => Some(t.game()),
                _ => None,
            };
            Node {
                game: a.game().expect("checked signature"),
                kind: NodeKind::Atom(a.clone(), param),
            }
        }
        Desc::Curry(c) => {
            let c = node(c);
            Node {
                game: curry_game(&c.game),
                kind: NodeKind::Curry(Box::new(c)),
            }
        }
        Desc::Pair(a, b) => {
            let (a, b) = (node(a), node(b));
            Node {
                game: pair_games(&a.game, &b.game),
                kind: NodeKind::Pair(Box::new(a), Box::new(b)),
            }
        }
        Desc::PromoteConcat(a, b) => {
            let (_, mid) = signature(a).expect("checked signature");
            let a = node(a);
            let pa = Node {
                game: promote_game(&a.game),
                kind: NodeKind::Promote(Box::new(a)),
            };
            let b = node(b);
            let game = concatenate_games(&pa.game, &b.game, &exponential(&mid.game()));
            Node {
                game,
                kind: NodeKind::Concat(Box::new(pa), Box::new(b)),
            }
        }
    }
}

fn stuck(what: &str) -> Decision {
    Decision::Stuck(what.to_string())
}

/// Runs a child on the peeled prefix of `blocks` selected by `keep`, then re-tags.
fn delegate(
    n: &Node,
    child: &Node,
    blocks: &[Move],
    complete: bool,
    side: Side,
    thread: Option<&OuterTag>,
    keep: impl Fn(&Move) -> Option<Move>,
) -> Decision {
    let mut sub = Vec::with_capacity(blocks.len());
    for b in blocks {
        match keep(b) {
            Some(m) => sub.push(m),
            None => break,
        }
    }
    let cut = sub.len() < blocks.len();
    match decide(child, &sub, complete || cut) {
        Decision::Done(sel, m) => match unpeel(&n.game, side, thread, &m) {
            Some(m) => Decision::Done(sel, m),
            None => stuck("child move has no image in the composite"),
        },
        d => d,
    }
}

fn decide(n: &Node, blocks: &[Move], complete: bool) -> Decision {
    let Some(o) = blocks.first() else { return Decision::More };
    let g = &n.game;
    match &n.kind {
        NodeKind::Atom(a, param) => decide_atom(a, param.as_ref(), g, blocks, complete),
        NodeKind::Curry(c) => delegate(n, c, blocks, complete, Side::Left, None, |m| peel(g, m).map(|p| p.mv)),
        NodeKind::Concat(l, r) => {
            let Some(p) = peel(g, o) else {
                return stuck("unreadable move");
            };
            let child = if p.side == Side::Left { l } else { r };
            delegate(n, child, blocks, complete, p.side, None, |m| {
                peel(g, m).filter(|q| q.side == p.side).map(|q| q.mv)
            })
        }
        NodeKind::Promote(c) => {
            let Some(f) = peel(g, o).and_then(|p| p.thread) else {
                return stuck("unthreaded move");
            };
            delegate(n, c, blocks, complete, Side::Left, Some(&f), |m| {
                peel(g, m).filter(|q| q.thread.as_ref() == Some(&f)).map(|q| q.mv)
            })
        }
        NodeKind::Pair(l, r) => {
            // shared domain moves end in W; the first other block names the side
            let Some(opening) = blocks.iter().find(|m| m.inner.last() != Some(W)) else {
                return if complete {
                    stuck("pairing without an opening")
                } else {
                    Decision::More
                };
            };
            let Some(side) = peel(g, opening).map(|p| p.side) else {
                return stuck("unreadable move");
            };
            let child = if side == Side::Left { l } else { r };
            delegate(n, child, blocks, complete, side, None, |m| {
                peel(g, m)
                    .filter(|q| q.side == side || m.inner.last() == Some(W))
                    .map(|q| q.mv)
            })
        }
    }
}

fn mv(sub: Substance, ls: &[Letter], outer: OuterTag) -> Move {
    Move::new(sub, InnerTag(ls.to_vec()), outer)
}

fn th0() -> OuterTag {
    OuterTag::wrap(&OuterTag::empty(), &OuterTag::empty())
}

/// Block `k` (0-based) of the view, or a request for more.
macro_rules! need {
    ($blocks:expr, $k:expr, $complete:expr) => {
        match $blocks.get($k) {
            Some(b) => b,
            None if $complete => return stuck("view too short"),
            None => return Decision::More,
        }
    };
}

fn decide_atom(a: &Atom, param: Option<&Game>, g: &Game, v: &[Move], complete: bool) -> Decision {
    use Selector::{I, II, III, V};
    let o = &v[0];
    let done = |sel, m| Decision::Done(sel, m);
    let initial = g.is_initial(o);
    let side = o.inner.last();
    match a {
        Atom::Zero(_) if initial => done(I, mv(No, &[E], OuterTag::empty())),
        Atom::Bool(b) if initial => done(
            I,
            mv(if *b { Substance::Tt } else { Substance::Ff }, &[E], OuterTag::empty()),
        ),
        Atom::Zero(_) | Atom::Bool(_) => stuck("constant already answered"),
        Atom::Numeral(k) => {
            if !complete {
                return Decision::More;
            }
            let yes = v.iter().filter(|m| m.sub == Yes).count() as u64;
            done(I, mv(if yes < *k { Yes } else { No }, &[E], OuterTag::empty()))
        }
        Atom::Succ | Atom::Pred | Atom::IfZero if initial => done(I, mv(QHat, &[W], th0())),
        Atom::Succ => match side {
            Some(W) => {
                let j = need!(v, 1, complete);
                done(if j.sub == QHat { II } else { III }, mv(Yes, &[E], OuterTag::empty()))
            }
            Some(E) => match need!(v, 2, complete).sub {
                Yes => done(III, mv(Q, &[W], th0())),
                No => done(I, mv(No, &[E], OuterTag::empty())),
                _ => stuck("succ: unexpected answer"),
            },
            _ => stuck("succ: bad move"),
        },
        Atom::Pred => match side {
            Some(W) => {
                let j = need!(v, 1, complete);
                if j.sub == QHat {
                    return match o.sub {
                        Yes => done(I, mv(Q, &[W], th0())),
                        _ => done(II, mv(No, &[E], OuterTag::empty())),
                    };
                }
                let before = need!(v, 2, complete);
                let sel = if before.inner.last() == Some(W) { V } else { III };
                done(sel, mv(o.sub, &[E], OuterTag::empty()))
            }
            Some(E) => done(III, mv(Q, &[W], th0())),
            _ => stuck("pred: bad move"),
        },
        Atom::IfZero => match o.sub {
            No => done(II, mv(Substance::Tt, &[E], OuterTag::empty())),
            Yes => done(II, mv(Substance::Ff, &[E], OuterTag::empty())),
            _ => stuck("zero?: bad move"),
        },
        Atom::Case(_) => decide_case(o, initial, v, complete),
        Atom::Fix(_) => decide_fix(o, initial, param, v),
        Atom::Proj { path, .. } => relay(o, initial, |m| proj_copy(path, m)),
        Atom::Ev(..) => relay(o, initial, ev_copy),
    }
}

fn relay(o: &Move, initial: bool, copy: impl Fn(&Move) -> Option<Move>) -> Decision {
    match copy(o) {
        Some(m) => Decision::Done(if initial { Selector::I } else { Selector::III }, m),
        None => stuck("relay: no copy"),
    }
}

fn decide_case(o: &Move, initial: bool, v: &[Move], complete: bool) -> Decision {
    use Selector::{I, II, III};
    if initial {
        let t = OuterTag(vec![TagToken::L, TagToken::H]).concat(&o.outer);
        return Decision::Done(I, mv(QHat, &[E, W], OuterTag::wrap(&t, &OuterTag::empty())));
    }
    let is_bool_answer = |m: &Move| matches!(m.sub, Substance::Tt | Substance::Ff) && m.inner.0 == [E, W];
    if is_bool_answer(o) {
        let first = need!(v, 2, complete);
        let b = if o.sub == Substance::Tt { W } else { E };
        let Some(a) = first.inner.strip(E) else {
            return stuck("case: bad opening");
        };
        let outer = OuterTag::wrap(&OuterTag::empty(), &first.outer);
        return Decision::Done(II, Move::new(first.sub, a.extend(&[b, W, W]), outer));
    }
    match o.inner.last() {
        Some(E) => {
            let partner = need!(v, 2, complete);
            let (Some(b), Some(x)) = (partner.inner.from_end(2), o.inner.strip(E)) else {
                return stuck("case: bad partner");
            };
            let outer = OuterTag::wrap(&OuterTag::empty(), &o.outer);
            Decision::Done(III, Move::new(o.sub, x.extend(&[b, W, W]), outer))
        }
        Some(W) => {
            let Some((t, e)) = o.outer.unwrap_group() else {
                return stuck("case: bad tag");
            };
            let (Some(b), true) = (o.inner.from_end(2), t.is_empty()) else {
                return stuck("case: bad thread");
            };
            let Some(x) = o.inner.strip_suffix(&[b, W, W]) else {
                return stuck("case: bad move");
            };
            let before = need!(v, 2, complete);
            let sel = if is_bool_answer(before) { II } else { III };
            Decision::Done(sel, Move::new(o.sub, x.push(E), e))
        }
        _ => stuck("case: bad move"),
    }
}

fn decide_fix(o: &Move, initial: bool, param: Option<&Game>, _v: &[Move]) -> Decision {
    use Selector::{I, II, III};
    let eps = OuterTag::empty();
    let Some(a_game) = param else {
        return stuck("fix: missing parameter");
    };
    let out = |sel, m: Option<Move>| match m {
        Some(m) => Decision::Done(sel, m),
        None => stuck("fix: bad move"),
    };
    if initial {
        let m = o
            .inner
            .strip(E)
            .map(|x| Move::new(o.sub, x.extend(&[E, W]), OuterTag::wrap(&eps, &o.outer)));
        return out(I, m);
    }
    match (o.inner.from_end(1), o.inner.last()) {
        (Some(W), Some(W)) => {
            let parts = o.outer.unwrap_group().and_then(|(e1, rest)| {
                let (e, f) = rest.unwrap_group()?;
                Some((e1, e, f, o.inner.strip_suffix(&[W, W])?))
            });
            let Some((e1, e, f, a)) = parts else {
                return stuck("fix: bad tag");
            };
            let launch = a_game.is_initial(&Move::new(o.sub, a.clone(), f.clone()));
            let m = Move::new(
                o.sub,
                a.extend(&[E, W]),
                OuterTag::wrap(&OuterTag::pair_id(&e1, &e), &f),
            );
            out(if launch { II } else { III }, Some(m))
        }
        (Some(E), Some(W)) => {
            let m = o.outer.unwrap_group().and_then(|(t, f)| {
                let a = o.inner.strip_suffix(&[E, W])?;
                if t.is_empty() {
                    Some(Move::new(o.sub, a.push(E), f))
                } else {
                    let (e1, e) = t.split_pair_id()?;
                    Some(Move::new(
                        o.sub,
                        a.extend(&[W, W]),
                        OuterTag::wrap(&e1, &OuterTag::wrap(&e, &f)),
                    ))
                }
            });
            out(III, m)
        }
        (_, Some(E)) => {
            let m = o
                .inner
                .strip(E)
                .map(|a| Move::new(o.sub, a.extend(&[E, W]), OuterTag::wrap(&eps, &o.outer)));
            out(III, m)
        }
        _ => stuck("fix: bad move"),
    }
}

fn proj_copy(path: &[Letter], m: &Move) -> Option<Move> {
    match m.inner.last()? {
        E => {
            let x = m.inner.strip(E)?.extend(path).push(W);
            Some(Move::new(m.sub, x, OuterTag::wrap(&OuterTag::empty(), &m.outer)))
        }
        W => {
            let (f, e) = m.outer.unwrap_group()?;
            if !f.is_empty() {
                return None;
            }
            Some(Move::new(m.sub, m.inner.strip(W)?.strip_suffix(path)?.push(E), e))
        }
        _ => None,
    }
}

fn ev_copy(m: &Move) -> Option<Move> {
    let eps = OuterTag::empty();
    match m.inner.last()? {
        E => Some(Move::new(
            m.sub,
            m.inner.strip(E)?.extend(&[E, W, W]),
            OuterTag::wrap(&eps, &m.outer),
        )),
        W => {
            let (t, rest) = m.outer.unwrap_group()?;
            let x = m.inner.strip(W)?;
            match (x.last()?, t.0.as_slice()) {
                (W, []) => {
                    let y = x.strip(W)?;
                    match y.last()? {
                        E => Some(Move::new(m.sub, y, rest)),
                        W => {
                            let (f, e) = rest.unwrap_group()?;
                            let arg = OuterTag(vec![TagToken::L, TagToken::H]).concat(&f);
                            Some(Move::new(m.sub, y.strip(W)?.extend(&[E, W]), OuterTag::wrap(&arg, &e)))
                        }
                        _ => None,
                    }
                }
                (E, [TagToken::L, TagToken::H, f @ ..]) => {
                    let f = OuterTag(f.to_vec());
                    let a = x.strip(E)?.extend(&[W, W, W]);
                    Some(Move::new(m.sub, a, OuterTag::wrap(&eps, &OuterTag::wrap(&f, &rest))))
                }
                _ => None,
            }
        }
        _ => None,
    }
}

impl fmt::Display for JpaMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MACHINE {} -> {}", self.dom, self.cod)?;
        writeln!(f, "STATES {}", self.states())?;
        fn walk(f: &mut fmt::Formatter<'_>, n: &Node, id: &mut usize, depth: usize) -> fmt::Result {
            let me = *id;
            *id += 1;
            let pad = "  ".repeat(depth);
            match &n.kind {
                NodeKind::Atom(a, _) => writeln!(f, "{pad}s{me} atom {a}: read view blocks, emit selector and move"),
                NodeKind::Concat(l, r) => {
                    writeln!(f, "{pad}s{me} concat: route on S/N/W/E suffix of the last O-move")?;
                    walk(f, l, id, depth + 1)?;
                    walk(f, r, id, depth + 1)
                }
                NodeKind::Pair(l, r) => {
                    writeln!(f, "{pad}s{me} pair: route on WE/EE suffix of the opening")?;
                    walk(f, l, id, depth + 1)?;
                    walk(f, r, id, depth + 1)
                }
                NodeKind::Promote(c) => {
                    writeln!(f, "{pad}s{me} promote: strip thread group of the last O-move")?;
                    walk(f, c, id, depth + 1)
                }
                NodeKind::Curry(c) => {
                    writeln!(f, "{pad}s{me} curry: retag inner suffixes")?;
                    walk(f, c, id, depth + 1)
                }
            }
        }
        walk(f, &self.root, &mut 0, 0)?;
        writeln!(f, "TRANSITIONS")?;
        writeln!(
            f,
            "  read $ -> left; read m -> left; read tag token -> left until the block's groups close"
        )?;
        writeln!(
            f,
            "  block complete, decision pending: O-move -> jump along edge; P-move -> left"
        )?;
        writeln!(
            f,
            "  decision made: push J, p, e1..ek, $ one symbol per step, then halt"
        )?;
        writeln!(f, "DESCRIPTION")?;
        write!(f, "{}", self.desc)
    }
}
