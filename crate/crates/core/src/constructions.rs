//! Game constructions and their retagging maps.
//!
//! Every inner-tag surgery of the repository lives in the `peel`/`unpeel`
//! helpers below; games and strategies call them and nothing else.

use std::cell::RefCell;
use std::collections::HashSet;

use crate::games::{
    self as games, forced_dummy, not_member, project, project_with, view_just, Game, GameKind, Label, Move, Occ, Pol,
    Position, Projection, View, Violation,
};
use crate::strategies::{hide_strategy, Response, Strategy, StrategyImpl};
use crate::tags::{Letter, OuterTag, TagToken};

use Letter::{E, N, S, W};

pub fn tensor(a: &Game, b: &Game) -> Game {
    Game::new(GameKind::Tensor(a.clone(), b.clone()))
}

pub fn product(a: &Game, b: &Game) -> Game {
    Game::new(GameKind::Product(a.clone(), b.clone()))
}

pub fn exponential(a: &Game) -> Game {
    Game::new(GameKind::Exp(a.clone()))
}

pub fn linear_implication(a: &Game, b: &Game) -> Game {
    Game::new(GameKind::Lin(a.clone(), b.clone()))
}

/// `A ⇒ B = !A ⊸ B`.
pub fn implication(a: &Game, b: &Game) -> Game {
    linear_implication(&exponential(a), b)
}

/// `J‡K` where `b` is the normalized middle game of the decomposition.
pub fn concatenate_games(j: &Game, k: &Game, b: &Game) -> Game {
    Game::new(GameKind::Concat {
        j: j.clone(),
        k: k.clone(),
        b: b.clone(),
    })
}

pub fn pair_games(l: &Game, r: &Game) -> Game {
    Game::new(GameKind::Pair(l.clone(), r.clone()))
}

pub fn promote_game(g: &Game) -> Game {
    Game::new(GameKind::Promote(g.clone()))
}

pub fn curry_game(g: &Game) -> Game {
    Game::new(GameKind::Curry(g.clone()))
}

fn strip(m: &Move, l: Letter) -> Option<Move> {
    m.inner.strip(l).map(|i| m.with_inner(i))
}

fn strip2(m: &Move, a: Letter, b: Letter) -> Option<Move> {
    m.inner.strip_suffix(&[a, b]).map(|i| m.with_inner(i))
}

fn push(m: &Move, ls: &[Letter]) -> Move {
    m.with_inner(m.inner.extend(ls))
}

fn last2(m: &Move) -> (Option<Letter>, Option<Letter>) {
    (m.inner.from_end(1), m.inner.last())
}

/// Which component of a composite game a move comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A move of a composite game, peeled into its component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Peeled {
    pub side: Side,
    pub mv: Move,
    /// Thread of `!`-like constructions.
    pub thread: Option<OuterTag>,
}

fn peeled(side: Side, mv: Move) -> Peeled {
    Peeled { side, mv, thread: None }
}

/// The component move of `m`, without checking that it belongs to the arena.
pub fn peel(g: &Game, m: &Move) -> Option<Peeled> {
    match g.kind() {
        GameKind::Tensor(..) | GameKind::Product(..) | GameKind::Lin(..) => match m.inner.last()? {
            W => Some(peeled(Side::Left, strip(m, W)?)),
            E => Some(peeled(Side::Right, strip(m, E)?)),
            _ => None,
        },
        GameKind::Exp(_) => {
            let (f, e) = m.outer.unwrap_group()?;
            Some(Peeled {
                side: Side::Left,
                mv: m.with_outer(e),
                thread: Some(f),
            })
        }
        GameKind::Concat { .. } => match m.inner.last()? {
            W => Some(peeled(Side::Left, m.clone())),
            E => Some(peeled(Side::Right, m.clone())),
            S => Some(peeled(Side::Left, strip(m, S)?)),
            N => Some(peeled(Side::Right, strip(m, N)?)),
        },
        GameKind::Pair(..) => match last2(m) {
            (_, Some(W)) => Some(peeled(Side::Left, m.clone())),
            (Some(W), Some(E)) => Some(peeled(Side::Left, push(&strip2(m, W, E)?, &[E]))),
            (Some(E), Some(E)) => Some(peeled(Side::Right, push(&strip2(m, E, E)?, &[E]))),
            (_, Some(S)) => Some(peeled(Side::Left, strip(m, S)?)),
            (_, Some(N)) => Some(peeled(Side::Right, strip(m, N)?)),
            _ => None,
        },
        GameKind::Promote(_) => {
            let (f, e) = m.outer.unwrap_group()?;
            match m.inner.last()? {
                S => Some(Peeled {
                    side: Side::Left,
                    mv: strip(m, S)?.with_outer(e),
                    thread: Some(f),
                }),
                W => {
                    let (f, inner_thread) = f.split_pair_id()?;
                    let mv = m.with_outer(OuterTag::wrap(&inner_thread, &e));
                    Some(Peeled {
                        side: Side::Left,
                        mv,
                        thread: Some(f),
                    })
                }
                _ => Some(Peeled {
                    side: Side::Left,
                    mv: m.with_outer(e),
                    thread: Some(f),
                }),
            }
        }
        GameKind::Curry(_) => match last2(m) {
            (_, Some(N)) => Some(peeled(Side::Left, strip(m, N)?)),
            (_, Some(W)) => Some(peeled(Side::Left, push(m, &[W]))),
            (Some(W), Some(E)) => Some(peeled(Side::Left, push(&strip2(m, W, E)?, &[E, W]))),
            (Some(E), Some(E)) => Some(peeled(Side::Left, strip(m, E)?)),
            _ => None,
        },
        _ => None,
    }
}

/// Inverse of `peel` for a component move with the given component label.
pub fn unpeel(g: &Game, side: Side, thread: Option<&OuterTag>, x: &Move) -> Option<Move> {
    let internal = component(g, side)?.label(x)?.is_internal();
    Some(match g.kind() {
        GameKind::Tensor(..) | GameKind::Product(..) | GameKind::Lin(..) => match side {
            Side::Left => push(x, &[W]),
            Side::Right => push(x, &[E]),
        },
        GameKind::Exp(_) => x.with_outer(OuterTag::wrap(thread?, &x.outer)),
        GameKind::Concat { .. } => match (side, internal, x.inner.last()) {
            (Side::Left, true, _) | (Side::Left, false, Some(E)) => push(x, &[S]),
            (Side::Left, false, _) => x.clone(),
            (Side::Right, true, _) | (Side::Right, false, Some(W)) => push(x, &[N]),
            (Side::Right, false, _) => x.clone(),
        },
        GameKind::Pair(..) => match (side, internal, x.inner.last()) {
            (Side::Left, true, _) => push(x, &[S]),
            (Side::Right, true, _) => push(x, &[N]),
            (_, false, Some(W)) => x.clone(),
            (Side::Left, false, _) => push(&strip(x, E)?, &[W, E]),
            (Side::Right, false, _) => push(&strip(x, E)?, &[E, E]),
        },
        GameKind::Promote(_) => {
            let f = thread?;
            match (internal, x.inner.last()) {
                (true, _) => push(x, &[S]).with_outer(OuterTag::wrap(f, &x.outer)),
                (false, Some(W)) => {
                    let (g_thread, e) = x.outer.unwrap_group()?;
                    x.with_outer(OuterTag::wrap(&OuterTag::pair_id(f, &g_thread), &e))
                }
                (false, _) => x.with_outer(OuterTag::wrap(f, &x.outer)),
            }
        }
        GameKind::Curry(_) => match (internal, last2(x)) {
            (true, _) => push(x, &[N]),
            (false, (_, Some(E))) => push(x, &[E]),
            (false, (Some(W), Some(W))) => strip(x, W)?,
            (false, (Some(E), Some(W))) => push(&strip2(x, E, W)?, &[W, E]),
            _ => return None,
        },
        _ => return None,
    })
}

pub fn component(g: &Game, side: Side) -> Option<&Game> {
    match (g.kind(), side) {
        (GameKind::Tensor(a, _), Side::Left)
        | (GameKind::Product(a, _), Side::Left)
        | (GameKind::Lin(a, _), Side::Left)
        | (GameKind::Pair(a, _), Side::Left) => Some(a),
        (GameKind::Tensor(_, b), Side::Right)
        | (GameKind::Product(_, b), Side::Right)
        | (GameKind::Lin(_, b), Side::Right)
        | (GameKind::Pair(_, b), Side::Right) => Some(b),
        (GameKind::Exp(a), _) | (GameKind::Promote(a), _) | (GameKind::Curry(a), _) => Some(a),
        (GameKind::Concat { j, .. }, Side::Left) => Some(j),
        (GameKind::Concat { k, .. }, Side::Right) => Some(k),
        _ => None,
    }
}

/// Peels `m` and checks that the component move exists with the right polarity of
/// internality for the composite's suffix conventions.
fn resolve(g: &Game, m: &Move) -> Option<(Peeled, Label, Label)> {
    let mut p = peel(g, m)?;
    let inner_label = match (component(g, p.side)?.label(&p.mv), g.kind()) {
        (Some(l), _) => l,
        // the two sides of a pairing may name the threads of the shared domain differently
        (None, GameKind::Pair(_, r)) if m.inner.last() == Some(W) => {
            p.side = Side::Right;
            r.label(&p.mv)?
        }
        _ => return None,
    };
    let last = m.inner.last();
    let label = match g.kind() {
        GameKind::Tensor(..) | GameKind::Product(..) | GameKind::Exp(_) => inner_label,
        GameKind::Lin(..) => match p.side {
            Side::Left if inner_label.is_internal() => return None,
            Side::Left => inner_label.flipped(),
            Side::Right => inner_label,
        },
        GameKind::Concat { .. } => match (p.side, last, inner_label.is_internal()) {
            (Side::Left, Some(W), false) | (Side::Right, Some(E), false) => inner_label,
            (Side::Left, Some(S), true) | (Side::Right, Some(N), true) => inner_label,
            (Side::Left, Some(S), false) if p.mv.inner.last() == Some(E) => inner_label.internal(),
            (Side::Right, Some(N), false) if p.mv.inner.last() == Some(W) => inner_label.internal(),
            _ => return None,
        },
        GameKind::Pair(..) | GameKind::Curry(_) => {
            let internal_suffix = matches!(last, Some(S) | Some(N));
            if internal_suffix != inner_label.is_internal() {
                return None;
            }
            inner_label
        }
        GameKind::Promote(_) => {
            if (last == Some(S)) != inner_label.is_internal() {
                return None;
            }
            inner_label
        }
        _ => return None,
    };
    Some((p, inner_label, label))
}

pub(crate) fn label(g: &Game, m: &Move) -> Option<Label> {
    resolve(g, m).map(|(_, _, l)| l)
}

pub(crate) fn is_initial(g: &Game, m: &Move) -> bool {
    let Some((p, inner, _)) = resolve(g, m) else {
        return false;
    };
    let c = component(g, p.side).unwrap();
    match g.kind() {
        GameKind::Tensor(..) | GameKind::Product(..) | GameKind::Exp(_) => c.is_initial(&p.mv),
        GameKind::Lin(..) => p.side == Side::Right && c.is_initial(&p.mv),
        GameKind::Concat { .. } => p.side == Side::Right && m.inner.last() == Some(E) && c.is_initial(&p.mv),
        GameKind::Pair(..) => !inner.is_internal() && m.inner.last() == Some(E) && c.is_initial(&p.mv),
        GameKind::Promote(_) => !inner.is_internal() && m.inner.last() == Some(E) && c.is_initial(&p.mv),
        GameKind::Curry(_) => !inner.is_internal() && c.is_initial(&p.mv),
        _ => false,
    }
}

pub(crate) fn dummy(g: &Game, m: &Move) -> Option<Move> {
    let (p, inner, label) = resolve(g, m)?;
    if label.pol != Pol::P || !label.is_internal() {
        return None;
    }
    let c = component(g, p.side)?;
    match g.kind() {
        GameKind::Concat { .. } if !inner.is_internal() => {
            // a B-move P-played by one side is echoed on the other
            match p.side {
                Side::Left => Some(push(&strip(&p.mv, E)?, &[W, N])),
                Side::Right => Some(push(&strip(&p.mv, W)?, &[E, S])),
            }
        }
        _ => {
            let d = c.dummy(&p.mv)?;
            unpeel(g, p.side, p.thread.as_ref(), &d)
        }
    }
}

pub(crate) fn dum_in(g: &Game, s: &Position, view: &View<'_>, p2: usize) -> Option<usize> {
    let (p, inner, _) = resolve(g, &view(p2)?)?;
    let side = p.side;
    match g.kind() {
        GameKind::Concat { .. } if !inner.is_internal() => echo_justifier(g, s, view, p2),
        GameKind::Exp(_) | GameKind::Promote(_) => {
            let f = p.thread?;
            let sub = |i| {
                view(i)
                    .and_then(|m| peel(g, &m))
                    .filter(|q| q.thread.as_ref() == Some(&f))
                    .map(|q| q.mv)
            };
            games::dum_in(component(g, side)?, s, &sub, p2)
        }
        GameKind::Pair(..) => {
            // the side is that of the initial move the chain leads back to
            let mut root = p2;
            while let Some(j) = view_just(s, view, root) {
                root = j;
            }
            let side = peel(g, &view(root)?)?.side;
            let sub = |i| {
                view(i).and_then(|m| {
                    let q = peel(g, &m)?;
                    (q.side == side || m.inner.last() == Some(W)).then_some(q.mv)
                })
            };
            games::dum_in(component(g, side)?, s, &sub, p2)
        }
        _ => {
            let sub = |i| {
                view(i)
                    .and_then(|m| peel(g, &m))
                    .filter(|q| q.side == side)
                    .map(|q| q.mv)
            };
            games::dum_in(component(g, side)?, s, &sub, p2)
        }
    }
}

/// The echo of a B-move points at the original of the nearest B-move above the
/// one it copies, or at the copied move itself when there is none.
fn echo_justifier(g: &Game, s: &Position, view: &View<'_>, p2: usize) -> Option<usize> {
    let mut a = view_just(s, view, p2);
    while let Some(i) = a {
        let (_, inner, label) = resolve(g, &view(i)?)?;
        if !label.is_internal() {
            break;
        }
        if !inner.is_internal() {
            return (0..i).rev().find(|&j| view(j).is_some());
        }
        a = view_just(s, view, i);
    }
    Some(p2)
}

pub(crate) fn tag_groups(g: &Game, m: &Move) -> Option<usize> {
    match g.kind() {
        GameKind::Exp(a) => a.tag_groups(m).map(|k| k + 1),
        GameKind::Promote(c) => match m.inner.last()? {
            S => c.tag_groups(&strip(m, S)?).map(|k| k + 1),
            W => c.tag_groups(m),
            _ => c.tag_groups(m).map(|k| k + 1),
        },
        GameKind::Pair(l, r) if m.inner.last() == Some(W) => l.tag_groups(m).or_else(|| r.tag_groups(m)),
        _ => {
            let p = peel(g, m)?;
            component(g, p.side)?.tag_groups(&p.mv)
        }
    }
}

/// Projection of `s` onto one side, peeled.
pub fn side_projection(g: &Game, s: &Position, side: Side) -> Projection {
    // domain moves of a pairing belong to whichever side the position is in
    let shared = match g.kind() {
        GameKind::Pair(..) => pair_side(s).unwrap_or(Side::Left),
        _ => side,
    };
    project(s, |m| match peel(g, m) {
        Some(p) if matches!(g.kind(), GameKind::Pair(..)) && m.inner.last() == Some(W) => {
            (shared == side).then_some(p.mv)
        }
        Some(p) if p.side == side => Some(p.mv),
        _ => None,
    })
}

/// The side a position of a pairing has committed to, if any.
pub fn pair_side(s: &Position) -> Option<Side> {
    s.0.iter()
        .find_map(|o| match (o.mv.inner.from_end(1), o.mv.inner.last()) {
            (_, Some(S)) | (Some(W), Some(E)) => Some(Side::Left),
            (_, Some(N)) | (Some(E), Some(E)) => Some(Side::Right),
            _ => None,
        })
}

/// Projection of `s` onto one thread of a `!` or promotion, peeled.
pub fn thread_projection(g: &Game, s: &Position, f: &OuterTag) -> Projection {
    project(s, |m| match peel(g, m) {
        Some(p) if p.thread.as_ref() == Some(f) => Some(p.mv),
        _ => None,
    })
}

/// Threads of `s` in order of first appearance.
pub fn threads(g: &Game, s: &Position) -> Vec<OuterTag> {
    let mut out: Vec<OuterTag> = Vec::new();
    for o in &s.0 {
        if let Some(f) = peel(g, &o.mv).and_then(|p| p.thread) {
            if !out.contains(&f) {
                out.push(f);
            }
        }
    }
    out
}

/// Smallest `ℓ^i` whose decoding `(i)` differs from those of `used`.
pub fn fresh_thread(used: &[OuterTag]) -> OuterTag {
    fresh_threads(used, 1, &[]).swap_remove(0)
}

thread_local! {
    static FRESH: RefCell<(usize, Vec<OuterTag>)> = const { RefCell::new((1, Vec::new())) };
}

/// Runs `f` with extensions opening threads under the `span` smallest unused
/// names `ℓ^i` and under every unused name in `hints`.
pub fn with_fresh_names<T>(span: usize, hints: Vec<OuterTag>, f: impl FnOnce() -> T) -> T {
    let old = FRESH.with(|c| c.replace((span, hints)));
    let out = f();
    FRESH.with(|c| *c.borrow_mut() = old);
    out
}

fn fresh_threads(used: &[OuterTag], span: usize, hints: &[OuterTag]) -> Vec<OuterTag> {
    let mut taken: HashSet<_> = used.iter().filter_map(|f| f.decode().ok()).collect();
    let mut out = Vec::new();
    let mut i = 0usize;
    while out.len() < span {
        let cand = OuterTag(vec![TagToken::L; i]);
        if !taken.contains(&cand.decode().unwrap()) {
            out.push(cand);
        }
        i += 1;
    }
    taken.extend(out.iter().map(|f| f.decode().unwrap()));
    for h in hints {
        if let Ok(d) = h.decode() {
            if taken.insert(d) {
                out.push(h.clone());
            }
        }
    }
    out
}

fn with_component(c: &Game, proj: &Projection, what: &'static str) -> Result<(), Violation> {
    c.accepts(&proj.pos)
        .map_err(|e| not_member(what, format!("component projection rejected: {e}")))
}

fn check_threads(g: &Game, s: &Position, what: &'static str) -> Result<(), Violation> {
    let c = component(g, Side::Left).unwrap();
    let ts = threads(g, s);
    let mut seen = HashSet::new();
    for f in &ts {
        let de = f.decode()?;
        if !seen.insert(de) {
            return Err(not_member(what, format!("thread {f} clashes with another thread")));
        }
        with_component(c, &thread_projection(g, s, f), what)?;
    }
    for o in &s.0 {
        if let Some(j) = o.just {
            let t1 = peel(g, &o.mv).and_then(|p| p.thread);
            let t2 = peel(g, &s.0[j].mv).and_then(|p| p.thread);
            if t1 != t2 {
                return Err(not_member(what, "pointer across threads"));
            }
        }
    }
    Ok(())
}

pub(crate) fn structure(g: &Game, s: &Position) -> Result<(), Violation> {
    let name = g.name();
    let sides: Vec<Option<Side>> = s.0.iter().map(|o| peel(g, &o.mv).map(|p| p.side)).collect();
    match g.kind() {
        GameKind::Tensor(a, b) | GameKind::Lin(a, b) => {
            let is_lin = matches!(g.kind(), GameKind::Lin(..));
            for (i, o) in s.0.iter().enumerate() {
                let Some(j) = o.just else { continue };
                let same = sides[i] == sides[j];
                let crosses_ok = is_lin
                    && sides[i] == Some(Side::Left)
                    && a.is_initial(&peel(g, &o.mv).unwrap().mv)
                    && g.is_initial(&s.0[j].mv);
                let a_initial = is_lin && sides[i] == Some(Side::Left) && a.is_initial(&peel(g, &o.mv).unwrap().mv);
                if a_initial && !crosses_ok {
                    return Err(not_member(name, "initial domain move must point at a codomain initial"));
                }
                if !same && !crosses_ok {
                    return Err(not_member(name, "pointer across components"));
                }
            }
            with_component(a, &side_projection(g, s, Side::Left), name)?;
            with_component(b, &side_projection(g, s, Side::Right), name)
        }
        GameKind::Product(a, b) => {
            let left = sides.contains(&Some(Side::Left));
            let right = sides.contains(&Some(Side::Right));
            if left && right {
                return Err(not_member(name, "position touches both components"));
            }
            if right {
                with_component(b, &side_projection(g, s, Side::Right), name)
            } else {
                with_component(a, &side_projection(g, s, Side::Left), name)
            }
        }
        GameKind::Exp(_) | GameKind::Promote(_) => check_threads(g, s, name),
        GameKind::Concat { j, k, b } => {
            with_component(j, &side_projection(g, s, Side::Left), name)?;
            with_component(k, &side_projection(g, s, Side::Right), name)?;
            let u = project(s, |m| match last2(m) {
                (Some(E), Some(S)) => Some(push(&strip2(m, E, S)?, &[W])),
                (Some(W), Some(N)) => Some(push(&strip2(m, W, N)?, &[E])),
                _ => None,
            });
            copycat_prefix(b, &u.pos).map_err(|e| not_member(name, format!("middle game: {e}")))
        }
        GameKind::Pair(l, r) => {
            let touches = |suffixes: &[[Letter; 2]], single: Letter| {
                s.0.iter()
                    .any(|o| o.mv.inner.last() == Some(single) || suffixes.iter().any(|sfx| o.mv.inner.ends_with(sfx)))
            };
            let in_b = touches(&[[E, E]], N);
            let in_a = touches(&[[W, E]], S);
            if in_a && in_b {
                return Err(not_member(name, "position touches both sides"));
            }
            if in_b {
                with_component(r, &side_projection(g, s, Side::Right), name)
            } else {
                with_component(l, &side_projection(g, s, Side::Left), name)
            }
        }
        GameKind::Curry(c) => with_component(c, &side_projection(g, s, Side::Left), name),
        _ => Err(not_member(name, "unsupported game kind")),
    }
}

/// Membership of `u` (a position of `B⊸B`) in `Pref(cp_B)`.
pub fn copycat_prefix(b: &Game, u: &Position) -> Result<(), Violation> {
    linear_implication(b, b).accepts(u)?;
    for i in (1..u.len()).step_by(2) {
        let o = &u.0[i - 1];
        let p = &u.0[i];
        if p.mv != flip_side(&o.mv) {
            return Err(not_member("copy-cat", format!("occurrence {i} is not a copy")));
        }
        let want = match o.just {
            None => Some(i - 1),
            Some(j) => Some(if j % 2 == 0 { j + 1 } else { j - 1 }),
        };
        if p.just != want {
            return Err(not_member(
                "copy-cat",
                format!("occurrence {i} has the wrong justifier"),
            ));
        }
    }
    Ok(())
}

/// Swaps the outermost `W`/`E` letter.
pub fn flip_side(m: &Move) -> Move {
    match m.inner.last() {
        Some(W) => push(&strip(m, W).unwrap(), &[E]),
        Some(E) => push(&strip(m, E).unwrap(), &[W]),
        _ => m.clone(),
    }
}

fn lift(g: &Game, side: Side, thread: Option<&OuterTag>, proj: &Projection, exts: Vec<Occ>) -> Vec<Occ> {
    exts.into_iter()
        .filter_map(|o| {
            let mv = unpeel(g, side, thread, &o.mv)?;
            Some(Occ::new(mv, o.just.map(|j| proj.orig(j))))
        })
        .collect()
}

pub(crate) fn candidates(g: &Game, s: &Position) -> Vec<Occ> {
    let mut out = Vec::new();
    match g.kind() {
        GameKind::Tensor(a, b) | GameKind::Product(a, b) => {
            for (side, c) in [(Side::Left, a), (Side::Right, b)] {
                let proj = side_projection(g, s, side);
                out.extend(lift(g, side, None, &proj, c.extensions(&proj.pos)));
            }
        }
        GameKind::Lin(a, b) => {
            let proj = side_projection(g, s, Side::Right);
            out.extend(lift(g, Side::Right, None, &proj, b.extensions(&proj.pos)));
            let proj = side_projection(g, s, Side::Left);
            let b_initials: Vec<usize> = (0..s.len()).filter(|&i| g.is_initial(&s.0[i].mv)).collect();
            for o in lift(g, Side::Left, None, &proj, a.extensions(&proj.pos)) {
                if o.just.is_none() {
                    out.extend(b_initials.iter().map(|&j| Occ::new(o.mv.clone(), Some(j))));
                } else {
                    out.push(o);
                }
            }
        }
        GameKind::Exp(a) | GameKind::Promote(a) => {
            let ts = threads(g, s);
            for f in &ts {
                let proj = thread_projection(g, s, f);
                out.extend(lift(g, Side::Left, Some(f), &proj, a.extensions(&proj.pos)));
            }
            let fresh = FRESH.with(|c| {
                let c = c.borrow();
                fresh_threads(&ts, c.0, &c.1)
            });
            for f in fresh {
                let proj = thread_projection(g, s, &f);
                out.extend(lift(g, Side::Left, Some(&f), &proj, a.extensions(&Position::empty())));
            }
        }
        GameKind::Concat { j, k, .. } => {
            if let Some(d) = forced_dummy(g, s) {
                return vec![d];
            }
            for (side, c) in [(Side::Left, j), (Side::Right, k)] {
                let proj = side_projection(g, s, side);
                out.extend(lift(g, side, None, &proj, c.extensions(&proj.pos)));
            }
        }
        GameKind::Pair(l, r) => {
            if let Some(d) = forced_dummy(g, s) {
                return vec![d];
            }
            for (side, c) in [(Side::Left, l), (Side::Right, r)] {
                let proj = side_projection(g, s, side);
                out.extend(lift(g, side, None, &proj, c.extensions(&proj.pos)));
            }
        }
        GameKind::Curry(c) => {
            if let Some(d) = forced_dummy(g, s) {
                return vec![d];
            }
            let proj = side_projection(g, s, Side::Left);
            out.extend(lift(g, Side::Left, None, &proj, c.extensions(&proj.pos)));
        }
        _ => {}
    }
    out
}

/// Every occurrence of `s` peeled into the component game, with a map back.
pub fn peel_all(g: &Game, s: &Position) -> Projection {
    project_with(s, |_, o| peel(g, &o.mv).map(|p| p.mv))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Combinator {
    Concat,
    Pair,
    Promote,
    Curry,
}

/// A strategy on a composite game answering through one component strategy.
struct Composite {
    game: Game,
    kind: Combinator,
    parts: Vec<Strategy>,
    name: String,
}

fn side_index(side: Side) -> usize {
    match side {
        Side::Left => 0,
        Side::Right => 1,
    }
}

impl StrategyImpl for Composite {
    fn game(&self) -> &Game {
        &self.game
    }

    fn respond(&self, s: &Position) -> Option<Response> {
        let g = &self.game;
        let o = s.last()?;
        let p = peel(g, &o.mv)?;
        let (side, thread, proj) = match self.kind {
            Combinator::Concat => (p.side, None, side_projection(g, s, p.side)),
            Combinator::Curry => (Side::Left, None, side_projection(g, s, Side::Left)),
            Combinator::Promote => {
                let f = p.thread?;
                let proj = thread_projection(g, s, &f);
                (Side::Left, Some(f), proj)
            }
            Combinator::Pair => {
                let side = peel(g, &s.0.first()?.mv)?.side;
                let proj = project(s, |m| match peel(g, m) {
                    Some(q) if q.side == side || m.inner.last() == Some(W) => Some(q.mv),
                    _ => None,
                });
                (side, None, proj)
            }
        };
        let part = match self.kind {
            Combinator::Concat | Combinator::Pair => &self.parts[side_index(side)],
            _ => &self.parts[0],
        };
        let r = part.respond(&proj.pos)?;
        let mv = unpeel(g, side, thread.as_ref(), &r.mv)?;
        // the component's P-view is a suffix of the full one, so its selector carries over
        Some(Response {
            mv,
            just: proj.orig(r.just),
            sel: r.sel,
        })
    }

    fn name(&self) -> String {
        self.name.clone()
    }
}

/// `⟨σ, τ⟩`: plays as σ when O opens on the left part, as τ otherwise.
pub fn pair_strategies(sigma: &Strategy, tau: &Strategy) -> Strategy {
    Strategy::new(Composite {
        game: pair_games(sigma.game(), tau.game()),
        kind: Combinator::Pair,
        parts: vec![sigma.clone(), tau.clone()],
        name: format!("<{},{}>", sigma.name(), tau.name()),
    })
}

/// `φ†`: plays as φ inside the thread of the last O-move.
pub fn promote_strategy(phi: &Strategy) -> Strategy {
    Strategy::new(Composite {
        game: promote_game(phi.game()),
        kind: Combinator::Promote,
        parts: vec![phi.clone()],
        name: format!("{}+", phi.name()),
    })
}

/// `σ‡τ` over the middle game `b`.
pub fn concatenate_strategies(sigma: &Strategy, tau: &Strategy, b: &Game) -> Strategy {
    Strategy::new(Composite {
        game: concatenate_games(sigma.game(), tau.game(), b),
        kind: Combinator::Concat,
        parts: vec![sigma.clone(), tau.clone()],
        name: format!("({}|{})", sigma.name(), tau.name()),
    })
}

/// `σ;τ`, the hidden concatenation.
pub fn compose(sigma: &Strategy, tau: &Strategy, b: &Game) -> Strategy {
    hide_strategy(&concatenate_strategies(sigma, tau, b))
}

pub fn curry_strategy(phi: &Strategy) -> Strategy {
    Strategy::new(Composite {
        game: curry_game(phi.game()),
        kind: Combinator::Curry,
        parts: vec![phi.clone()],
        name: format!("L({})", phi.name()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{boolean_game, enumerate_positions, lazy_nat_game, Substance};
    use crate::strategies::check_strategy;
    use crate::tags::InnerTag;

    fn mv(sub: Substance, inner: &str, outer: &str) -> Move {
        Move::new(sub, InnerTag::parse(inner).unwrap(), OuterTag::parse(outer).unwrap())
    }

    fn pos(items: &[(Move, Option<usize>)]) -> Position {
        Position(items.iter().map(|(m, j)| Occ::new(m.clone(), *j)).collect())
    }

    use Substance::*;

    #[test]
    fn lin_plays() {
        let g = linear_implication(&boolean_game(), &boolean_game());
        let s = pos(&[
            (mv(QHat, "E", ""), None),
            (mv(QHat, "W", ""), Some(0)),
            (mv(Tt, "W", ""), Some(1)),
            (mv(Tt, "E", ""), Some(0)),
        ]);
        assert!(g.contains(&s));
        let constant = pos(&[(mv(QHat, "E", ""), None), (mv(Ff, "E", ""), Some(0))]);
        assert!(g.contains(&constant));
        let wrong = pos(&[(mv(QHat, "W", ""), None)]);
        assert!(!g.contains(&wrong));
    }

    #[test]
    fn tensor_switches() {
        let g = tensor(&lazy_nat_game(), &lazy_nat_game());
        let s = pos(&[
            (mv(QHat, "W", ""), None),
            (mv(Yes, "W", ""), Some(0)),
            (mv(QHat, "E", ""), None),
            (mv(No, "E", ""), Some(2)),
        ]);
        assert!(g.contains(&s));
        // P cannot switch component by Alt: the answer must be a P-move
        let bad = pos(&[(mv(QHat, "W", ""), None), (mv(QHat, "E", ""), None)]);
        assert!(!g.contains(&bad));
    }

    #[test]
    fn product_one_side() {
        let g = product(&boolean_game(), &boolean_game());
        let s = pos(&[(mv(QHat, "W", ""), None), (mv(Tt, "W", ""), Some(0))]);
        assert!(g.contains(&s));
        let mixed = pos(&[(mv(QHat, "W", ""), None), (mv(Tt, "E", ""), Some(0))]);
        assert!(!g.contains(&mixed));
    }

    #[test]
    fn exponential_threads() {
        let g = exponential(&boolean_game());
        let s = pos(&[
            (mv(QHat, "", "[0 ]0 h"), None),
            (mv(Tt, "", "[0 ]0 h"), Some(0)),
            (mv(QHat, "", "[0 l ]0 h"), None),
            (mv(Ff, "", "[0 l ]0 h"), Some(2)),
        ]);
        assert!(g.contains(&s));
        // ⟅⁰⟆⁰ℏ and ... a thread whose name decodes like ℓ
        let clash = pos(&[
            (mv(QHat, "", "[0 l ]0 h"), None),
            (mv(Tt, "", "[0 l ]0 h"), Some(0)),
            (mv(QHat, "", "[0 [1 ]1 ]0 h"), None),
        ]);
        assert!(!g.contains(&clash));
        let one = pos(&[(mv(QHat, "", "[0 ]0 h"), None), (mv(Tt, "", "[0 ]0 h"), Some(0))]);
        assert!(g.contains(&one));
    }

    #[test]
    fn negation_concatenation() {
        let two = boolean_game();
        let neg = linear_implication(&two, &two);
        let g = concatenate_games(&neg, &neg, &two);
        let s = pos(&[
            (mv(QHat, "E", ""), None),
            (mv(QHat, "WN", ""), Some(0)),
            (mv(QHat, "ES", ""), Some(1)),
            (mv(QHat, "W", ""), Some(2)),
            (mv(Tt, "W", ""), Some(3)),
            (mv(Ff, "ES", ""), Some(2)),
            (mv(Ff, "WN", ""), Some(1)),
            (mv(Tt, "E", ""), Some(0)),
        ]);
        assert_eq!(g.accepts(&s), Ok(()));
        let mut bad = s.prefix(3);
        bad.0[2].mv = mv(QHat, "ES", "");
        bad.0[2].just = Some(0);
        assert!(!g.contains(&bad));
        let mut bad = s.prefix(7);
        bad.0[6].mv = mv(Tt, "WN", "");
        assert!(!g.contains(&bad));
        let hidden = crate::games::hide_game(&g);
        assert!(crate::games::is_subgame(&hidden, &neg, 6));
    }

    #[test]
    fn peel_unpeel_round_trip() {
        let two = boolean_game();
        let neg = linear_implication(&two, &two);
        let c = concatenate_games(&neg, &neg, &two);
        for s in enumerate_positions(&c, 8) {
            for o in &s.0 {
                let p = peel(&c, &o.mv).unwrap();
                assert_eq!(unpeel(&c, p.side, p.thread.as_ref(), &p.mv), Some(o.mv.clone()));
            }
        }
    }

    fn negation() -> Strategy {
        Strategy::new(crate::strategies::Relay::new(
            linear_implication(&boolean_game(), &boolean_game()),
            "not",
            |m| {
                let f = flip_side(m);
                Some(match m.sub {
                    Tt => f.swap_sub(Ff),
                    Ff => f.swap_sub(Tt),
                    _ => f,
                })
            },
        ))
    }

    trait SwapSub {
        fn swap_sub(&self, s: Substance) -> Move;
    }
    impl SwapSub for Move {
        fn swap_sub(&self, s: Substance) -> Move {
            Move::new(s, self.inner.clone(), self.outer.clone())
        }
    }

    fn play_out(sigma: &Strategy, os: &[(Move, Option<usize>)]) -> Position {
        let mut s = Position::empty();
        for (m, j) in os {
            s.push(Occ::new(m.clone(), *j));
            let r = sigma.respond(&s).expect("response");
            s.push(r.occ());
            while sigma.game().label(&s.last().unwrap().mv).unwrap().is_internal() {
                let d = forced_dummy(sigma.game(), &s).unwrap();
                s.push(d);
                let r = sigma.respond(&s).expect("response");
                s.push(r.occ());
            }
        }
        s
    }

    #[test]
    fn negation_concatenation_play() {
        let b = boolean_game();
        let nn = concatenate_strategies(&negation(), &negation(), &b);
        let s = play_out(&nn, &[(mv(QHat, "E", ""), None)]);
        let want = pos(&[
            (mv(QHat, "E", ""), None),
            (mv(QHat, "WN", ""), Some(0)),
            (mv(QHat, "ES", ""), Some(1)),
            (mv(QHat, "W", ""), Some(2)),
        ]);
        assert_eq!(s, want);
        let s = play_out(&nn, &[(mv(QHat, "E", ""), None), (mv(Tt, "W", ""), Some(3))]);
        assert_eq!(s.0[4].mv, mv(Tt, "W", ""));
        assert_eq!(s.0[5], Occ::new(mv(Ff, "ES", ""), Some(2)));
        assert_eq!(s.0[6], Occ::new(mv(Ff, "WN", ""), Some(1)));
        assert_eq!(s.0[7], Occ::new(mv(Tt, "E", ""), Some(0)));
        assert!(nn.game().contains(&s));
        assert!(check_strategy(&nn, 8).is_ok());
    }

    #[test]
    fn double_negation_is_copy_cat() {
        let b = boolean_game();
        let c = compose(&negation(), &negation(), &b);
        let cp = crate::strategies::copy_cat(&b);
        assert!(crate::strategies::same_behaviour(&c, &cp, 6).unwrap() > 0);
        assert!(crate::strategies::same_behaviour(&cp, &c, 6).unwrap() > 0);
        assert!(check_strategy(&c, 6).is_ok());
    }

    #[test]
    fn pairing_dispatches_on_opening() {
        let b = boolean_game();
        let p = pair_strategies(&crate::strategies::copy_cat(&b), &negation());
        let s = play_out(&p, &[(mv(QHat, "WE", ""), None), (mv(Tt, "W", ""), Some(1))]);
        assert_eq!(s.0[1].mv, mv(QHat, "W", ""));
        assert_eq!(s.0[3].mv, mv(Tt, "WE", ""));
        let s = play_out(&p, &[(mv(QHat, "EE", ""), None), (mv(Tt, "W", ""), Some(1))]);
        assert_eq!(s.0[3].mv, mv(Ff, "EE", ""));
        assert!(check_strategy(&p, 10).is_ok());
    }

    #[test]
    fn promotion_threads_project_to_component() {
        let der = crate::strategies::dereliction(&boolean_game());
        let pr = promote_strategy(&der);
        assert!(check_strategy(&pr, 10).is_ok());
        let mut multi = 0;
        for s in crate::strategies::enumerate_plays(&pr, 10) {
            let ts = threads(pr.game(), &s);
            multi += usize::from(ts.len() > 1);
            for f in ts {
                let t = thread_projection(pr.game(), &s, &f).pos;
                for k in (1..t.len()).step_by(2) {
                    let want = der.respond(&t.prefix(k)).map(|r| (r.mv, r.just));
                    assert_eq!(want, Some((t.0[k].mv.clone(), t.0[k].just.unwrap())));
                }
            }
        }
        assert!(multi > 0);
    }
}
