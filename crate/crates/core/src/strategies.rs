//! Strategies as next-move functions, their legality check, and hiding.

use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::constructions::{exponential, flip_side, linear_implication};
use crate::games::{forced_dummy, hide_game, hide_position, Game, Move, Occ, Pol, Position, Substance};
use crate::tags::{Letter, OuterTag};

/// Names the justifier of a P-move relative to the current P-view.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Selector {
    /// The last occurrence.
    I,
    /// The justifier of the second-last occurrence.
    II,
    /// The third-last occurrence.
    III,
    /// The fifth-last occurrence.
    V,
    Explicit(usize),
}

impl Selector {
    pub const MARKERS: [Selector; 4] = [Selector::I, Selector::II, Selector::III, Selector::V];

    pub fn marker(self) -> Option<&'static str> {
        match self {
            Selector::I => Some("i"),
            Selector::II => Some("ii"),
            Selector::III => Some("iii"),
            Selector::V => Some("v"),
            Selector::Explicit(_) => None,
        }
    }

    pub fn from_marker(s: &str) -> Option<Selector> {
        Selector::MARKERS.into_iter().find(|x| x.marker() == Some(s))
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.marker() {
            Some(m) => write!(f, "{m}"),
            None => write!(
                f,
                "#{}",
                match self {
                    Selector::Explicit(i) => *i,
                    _ => unreachable!(),
                }
            ),
        }
    }
}

/// Absolute index named by `sel` in the odd-length position `s`.
pub fn resolve_selector(s: &Position, sel: Selector) -> Option<usize> {
    match sel {
        Selector::I => s.view_entry_from_end(1),
        Selector::II => s.view_entry_from_end(2).and_then(|i| s.just(i)),
        Selector::III => s.view_entry_from_end(3),
        Selector::V => s.view_entry_from_end(5),
        Selector::Explicit(i) => Some(i),
    }
}

/// The first marker (in the order i, ii, iii, v) that names `just`.
pub fn classify_selector(s: &Position, just: usize) -> Selector {
    Selector::MARKERS
        .into_iter()
        .find(|&m| resolve_selector(s, m) == Some(just))
        .unwrap_or(Selector::Explicit(just))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Response {
    pub mv: Move,
    pub just: usize,
    pub sel: Selector,
}

impl Response {
    /// A response whose selector is the canonical classification of `just`.
    pub fn classified(s: &Position, mv: Move, just: usize) -> Response {
        Response {
            mv,
            just,
            sel: classify_selector(s, just),
        }
    }

    pub fn occ(&self) -> Occ {
        Occ::new(self.mv.clone(), Some(self.just))
    }
}

pub trait StrategyImpl: Send + Sync {
    fn game(&self) -> &Game;

    /// The P-move answering the odd-length position `s`, if any.
    fn respond(&self, s: &Position) -> Option<Response>;

    fn name(&self) -> String;

    /// O-moves considered when enumerating plays at the even-length position `s`.
    fn o_moves(&self, s: &Position) -> Vec<Occ> {
        self.game().extensions(s)
    }

    fn as_hidden(&self) -> Option<&Hidden> {
        None
    }
}

#[derive(Clone)]
pub struct Strategy(pub Arc<dyn StrategyImpl>);

impl fmt::Debug for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Strategy({})", self.0.name())
    }
}

impl Strategy {
    pub fn new(s: impl StrategyImpl + 'static) -> Strategy {
        Strategy(Arc::new(s))
    }

    pub fn game(&self) -> &Game {
        self.0.game()
    }

    pub fn respond(&self, s: &Position) -> Option<Response> {
        self.0.respond(s)
    }

    pub fn name(&self) -> String {
        self.0.name()
    }

    pub fn o_moves(&self, s: &Position) -> Vec<Occ> {
        self.0.o_moves(s)
    }

    /// The strategy `{ε}`.
    pub fn top(game: &Game) -> Strategy {
        Strategy::from_fn(game, "top", |_| None)
    }

    pub fn from_fn(
        game: &Game,
        name: &str,
        f: impl Fn(&Position) -> Option<Response> + Send + Sync + 'static,
    ) -> Strategy {
        Strategy::new(FnStrategy {
            game: game.clone(),
            name: name.to_string(),
            f: Box::new(f),
        })
    }
}

type RespondFn = Box<dyn Fn(&Position) -> Option<Response> + Send + Sync>;

struct FnStrategy {
    game: Game,
    name: String,
    f: RespondFn,
}

impl StrategyImpl for FnStrategy {
    fn game(&self) -> &Game {
        &self.game
    }
    fn respond(&self, s: &Position) -> Option<Response> {
        (self.f)(s)
    }
    fn name(&self) -> String {
        self.name.clone()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("illegal response at odd position of length {len}: {reason}\n{trace}")]
    Illegal { len: usize, reason: String, trace: String },
    #[error("selector {sel} does not name the justifier at position of length {len}")]
    Selector { sel: Selector, len: usize },
    #[error("internal run exceeded {0} moves")]
    Budget(usize),
}

fn illegal(t: &Position, reason: impl Into<String>) -> StrategyError {
    StrategyError::Illegal {
        len: t.len(),
        reason: reason.into(),
        trace: t.to_trace(),
    }
}

/// Checks one response against the odd-length position `t`.
pub fn check_response(game: &Game, t: &Position, r: &Response) -> Result<Position, StrategyError> {
    if resolve_selector(t, r.sel) != Some(r.just) {
        return Err(StrategyError::Selector {
            sel: r.sel,
            len: t.len(),
        });
    }
    let u = t.extended(r.occ());
    game.accepts(&u).map_err(|e| illegal(t, e.to_string()))?;
    Ok(u)
}

/// Enumerates plays against every O-extension up to length `depth` and checks that
/// each response lands in the game. Returns the number of responses checked.
pub fn check_strategy(sigma: &Strategy, depth: usize) -> Result<usize, StrategyError> {
    if let Some(h) = sigma.0.as_hidden() {
        return h.check(depth, None);
    }
    let mut count = 0;
    let mut stack = vec![Position::empty()];
    while let Some(s) = stack.pop() {
        if s.len() >= depth {
            continue;
        }
        for o in sigma.o_moves(&s) {
            let t = s.extended(o);
            if let Some(r) = sigma.respond(&t) {
                let u = check_response(sigma.game(), &t, &r)?;
                count += 1;
                if u.len() < depth {
                    stack.push(u);
                }
            }
        }
    }
    Ok(count)
}

/// All plays of `sigma` (positions reached) up to length `depth`.
pub fn enumerate_plays(sigma: &Strategy, depth: usize) -> Vec<Position> {
    let mut out = vec![Position::empty()];
    let mut stack = vec![Position::empty()];
    while let Some(s) = stack.pop() {
        if s.len() >= depth {
            continue;
        }
        for o in sigma.o_moves(&s) {
            let t = s.extended(o);
            out.push(t.clone());
            if t.len() >= depth {
                continue;
            }
            if let Some(r) = sigma.respond(&t) {
                let u = t.extended(r.occ());
                out.push(u.clone());
                stack.push(u);
            }
        }
    }
    out
}

/// Compares responses and available O-moves of two strategies on every play of
/// `a` up to length `depth`.
pub fn same_behaviour(a: &Strategy, b: &Strategy, depth: usize) -> Result<usize, String> {
    let mut checked = 0;
    for s in enumerate_plays(a, depth) {
        if s.len() % 2 == 1 {
            let ra = a.respond(&s).map(|r| (r.mv, r.just));
            let rb = b.respond(&s).map(|r| (r.mv, r.just));
            if ra != rb {
                return Err(format!("responses differ: {ra:?} vs {rb:?} after\n{}", s.to_trace()));
            }
            checked += 1;
        } else if s.len() < depth {
            let mut oa = a.o_moves(&s);
            let mut ob = b.o_moves(&s);
            oa.sort_by_key(|o| format!("{}@{:?}", o.mv, o.just));
            ob.sort_by_key(|o| format!("{}@{:?}", o.mv, o.just));
            if oa != ob {
                return Err(format!("O-moves differ after\n{}", s.to_trace()));
            }
        }
    }
    Ok(checked)
}

/// One play against a uniformly random legal Opponent.
pub fn random_play<R: Rng>(sigma: &Strategy, rng: &mut R, max_len: usize) -> Position {
    let mut s = Position::empty();
    while s.len() < max_len {
        let os = sigma.o_moves(&s);
        let Some(o) = os.choose(rng) else { break };
        s.push(o.clone());
        if s.len() >= max_len {
            break;
        }
        match sigma.respond(&s) {
            Some(r) => s.push(r.occ()),
            None => break,
        }
    }
    s
}

/// `ℋ^ω(σ)`: responses are computed on the reconstructed un-hidden play.
pub struct Hidden {
    inner: Strategy,
    game: Game,
    budget: usize,
}

pub const HIDDEN_BUDGET: usize = 200_000;

pub fn hide_strategy(sigma: &Strategy) -> Strategy {
    if sigma.game().is_normalized() {
        return sigma.clone();
    }
    Strategy::new(Hidden {
        inner: sigma.clone(),
        game: hide_game(sigma.game()),
        budget: HIDDEN_BUDGET,
    })
}

/// An un-hidden play and the hidden index of each of its occurrences.
#[derive(Clone, Debug)]
pub struct Witness {
    pub t: Position,
    pub hidden_index: Vec<Option<usize>>,
}

impl Witness {
    fn empty() -> Witness {
        Witness {
            t: Position::empty(),
            hidden_index: Vec::new(),
        }
    }

    fn hidden_len(&self) -> usize {
        self.hidden_index.iter().filter(|x| x.is_some()).count()
    }

    /// Index of hidden occurrence `k` in `t`.
    fn t_index(&self, k: usize) -> Option<usize> {
        self.hidden_index.iter().position(|x| *x == Some(k))
    }

    /// Hidden justifier of the last occurrence of `t` (j-subsequence chain).
    fn hidden_just(&self, j: Option<usize>) -> Option<usize> {
        let mut j = j;
        let mut skipped = 0;
        while let Some(jj) = j {
            if self.hidden_index[jj].is_some() {
                break;
            }
            j = self.t.just(jj);
            skipped += 1;
        }
        match j {
            Some(jj) if skipped % 2 == 0 => self.hidden_index[jj],
            _ => None,
        }
    }

    fn push(&mut self, o: Occ, external: bool) {
        let k = self.hidden_len();
        self.t.push(o);
        self.hidden_index.push(if external { Some(k) } else { None });
    }
}

impl Hidden {
    pub fn inner(&self) -> &Strategy {
        &self.inner
    }

    fn is_external(&self, m: &Move) -> bool {
        self.inner.game().label(m).is_some_and(|l| !l.is_internal())
    }

    /// Runs the inner strategy from an odd witness until it plays an external move.
    /// Returns `Ok(false)` when the inner strategy has no response.
    fn run_internal(&self, w: &mut Witness) -> Result<bool, StrategyError> {
        let mut steps = 0;
        loop {
            let Some(r) = self.inner.respond(&w.t) else {
                return Ok(false);
            };
            let ext = self.is_external(&r.mv);
            w.push(r.occ(), ext);
            if ext {
                return Ok(true);
            }
            let d = forced_dummy(self.inner.game(), &w.t)
                .ok_or_else(|| illegal(&w.t, "internal P-move without a dummy"))?;
            w.push(d, false);
            steps += 2;
            if steps > self.budget {
                return Err(StrategyError::Budget(self.budget));
            }
        }
    }

    /// Reconstructs the witness of an even-length hidden play, or of an odd one up
    /// to and including its last O-move.
    pub fn reconstruct(&self, h: &Position) -> Option<Witness> {
        let mut w = Witness::empty();
        for k in 0..h.len() {
            let o = &h.0[k];
            if k % 2 == 0 {
                let just = match o.just {
                    Some(j) => Some(w.t_index(j)?),
                    None => None,
                };
                w.push(Occ::new(o.mv.clone(), just), true);
            } else {
                if !self.run_internal(&mut w).ok()? {
                    return None;
                }
                let last = w.t.last()?;
                if last.mv != o.mv || w.hidden_just(last.just) != o.just {
                    return None;
                }
            }
        }
        Some(w)
    }

    /// Certificate-based legality check: every hidden response comes with the
    /// un-hidden play that produced it, which must lie in the inner game; when a
    /// declared game is given, hidden plays must also lie in it.
    pub fn check(&self, depth: usize, declared: Option<&Game>) -> Result<usize, StrategyError> {
        let mut count = 0;
        let mut stack = vec![Witness::empty()];
        let g = self.inner.game();
        while let Some(w) = stack.pop() {
            if w.hidden_len() >= depth {
                continue;
            }
            for o in g.extensions(&w.t) {
                if !self.is_external(&o.mv) {
                    continue;
                }
                let mut w2 = w.clone();
                w2.push(o, true);
                if !self.run_internal(&mut w2)? {
                    continue;
                }
                g.accepts(&w2.t).map_err(|e| illegal(&w2.t, e.to_string()))?;
                let h = hide_position(g, &w2.t).pos;
                let hp = h.prefix(h.len() - 1);
                let r = self
                    .respond(&hp)
                    .ok_or_else(|| illegal(&hp, "hidden strategy lost its response"))?;
                let last = h.last().unwrap();
                if r.mv != last.mv || Some(r.just) != last.just {
                    return Err(illegal(&hp, "reconstruction disagrees with the witness"));
                }
                if resolve_selector(&hp, r.sel) != Some(r.just) {
                    return Err(StrategyError::Selector {
                        sel: r.sel,
                        len: hp.len(),
                    });
                }
                if let Some(dg) = declared {
                    dg.accepts(&h).map_err(|e| illegal(&h, format!("declared game: {e}")))?;
                }
                count += 1;
                if h.len() < depth {
                    stack.push(w2);
                }
            }
        }
        Ok(count)
    }
}

impl StrategyImpl for Hidden {
    fn game(&self) -> &Game {
        &self.game
    }

    fn respond(&self, h: &Position) -> Option<Response> {
        let mut w = self.reconstruct(h)?;
        if !self.run_internal(&mut w).ok()? {
            return None;
        }
        let last = w.t.last()?.clone();
        let just = w.hidden_just(last.just)?;
        Some(Response::classified(h, last.mv, just))
    }

    fn name(&self) -> String {
        format!("hide({})", self.inner.name())
    }

    fn o_moves(&self, h: &Position) -> Vec<Occ> {
        let Some(w) = self.reconstruct(h) else {
            return Vec::new();
        };
        self.inner
            .game()
            .extensions(&w.t)
            .into_iter()
            .filter(|o| self.is_external(&o.mv))
            .filter_map(|o| {
                let just = w.hidden_just(o.just);
                if o.just.is_some() && just.is_none() {
                    return None;
                }
                Some(Occ::new(o.mv, just))
            })
            .collect()
    }

    fn as_hidden(&self) -> Option<&Hidden> {
        Some(self)
    }
}

type CopyFn = Box<dyn Fn(&Move) -> Option<Move> + Send + Sync>;

/// Copy-cat family: the response to `o` is `copy(o)`, justified by `o` itself when
/// `o` is initial (selector i) and by the partner of `J(o)` otherwise (selector iii).
pub struct Relay {
    game: Game,
    name: String,
    copy: CopyFn,
}

impl Relay {
    pub fn new(game: Game, name: &str, copy: impl Fn(&Move) -> Option<Move> + Send + Sync + 'static) -> Relay {
        Relay {
            game,
            name: name.to_string(),
            copy: Box::new(copy),
        }
    }
}

impl StrategyImpl for Relay {
    fn game(&self) -> &Game {
        &self.game
    }

    fn respond(&self, s: &Position) -> Option<Response> {
        let n = s.len();
        let o = s.last()?;
        if n.is_multiple_of(2) || self.game.label(&o.mv)?.pol != Pol::O {
            return None;
        }
        let mv = (self.copy)(&o.mv)?;
        // every P-move of a relay copies the occurrence right before it
        match o.just {
            None => Some(Response {
                mv,
                just: n - 1,
                sel: Selector::I,
            }),
            Some(j) => Some(Response {
                mv,
                just: j.checked_sub(1)?,
                sel: Selector::III,
            }),
        }
    }

    fn name(&self) -> String {
        self.name.clone()
    }
}

/// `cp_A` on `A ⊸ A`.
pub fn copy_cat(a: &Game) -> Strategy {
    assert!(a.is_normalized(), "copy-cat needs a normalized game");
    Strategy::new(Relay::new(linear_implication(a, a), "cp", |m| Some(flip_side(m))))
}

/// `der_A` on `A ⇒ A`: copy-cat through the thread `⟅⁰⟆⁰ℏ` of `!A`.
pub fn dereliction(a: &Game) -> Strategy {
    Strategy::new(Relay::new(linear_implication(&exponential(a), a), "der", |m| {
        match m.inner.last()? {
            Letter::E => {
                let x = m.inner.strip(Letter::E)?.push(Letter::W);
                Some(Move::new(m.sub, x, OuterTag::wrap(&OuterTag::empty(), &m.outer)))
            }
            Letter::W => {
                let (f, e) = m.outer.unwrap_group()?;
                if !f.is_empty() {
                    return None;
                }
                Some(Move::new(m.sub, m.inner.strip(Letter::W)?.push(Letter::E), e))
            }
            _ => None,
        }
    }))
}

/// `n̲` on `𝒩` itself: yes `n` times, then no.
pub fn numeral_on_nat(n: usize) -> Strategy {
    Strategy::from_fn(&crate::games::lazy_nat_game(), &format!("{n}"), move |s| {
        let k = s.len();
        if k % 2 == 0 {
            return None;
        }
        let asked = k / 2;
        if s.0.iter().any(|o| o.mv.sub == Substance::No) {
            return None;
        }
        let sub = if asked < n { Substance::Yes } else { Substance::No };
        Some(Response {
            mv: Move::base(sub),
            just: k - 1,
            sel: Selector::I,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{boolean_game, lazy_nat_game, terminal_game};
    use crate::tags::InnerTag;

    fn m(sub: Substance, inner: &str) -> Move {
        Move::new(sub, InnerTag::parse(inner).unwrap(), OuterTag::empty())
    }

    #[test]
    fn top_on_terminal() {
        assert_eq!(check_strategy(&Strategy::top(&terminal_game()), 8), Ok(0));
    }

    #[test]
    fn numerals_on_nat() {
        for n in 0..=10 {
            assert!(check_strategy(&numeral_on_nat(n), 2 * n + 4).is_ok());
        }
    }

    #[test]
    fn wrong_answer_rejected() {
        let bad = Strategy::from_fn(&lazy_nat_game(), "bad", |s| {
            Some(Response::classified(s, Move::base(Substance::Tt), s.len() - 1))
        });
        assert!(matches!(check_strategy(&bad, 4), Err(StrategyError::Illegal { .. })));
    }

    #[test]
    fn copy_cat_on_booleans() {
        let cp = copy_cat(&boolean_game());
        let s = Position(vec![Occ::new(m(Substance::QHat, "E"), None)]);
        let r = cp.respond(&s).unwrap();
        assert_eq!((r.mv.clone(), r.just, r.sel), (m(Substance::QHat, "W"), 0, Selector::I));
        let s = s.extended(r.occ()).extended(Occ::new(m(Substance::Ff, "W"), Some(1)));
        let r = cp.respond(&s).unwrap();
        assert_eq!((r.mv, r.just), (m(Substance::Ff, "E"), 0));
        assert!(check_strategy(&cp, 8).is_ok());
    }

    #[test]
    fn copy_cat_projections_agree() {
        let cp = copy_cat(&lazy_nat_game());
        let g = cp.game().clone();
        for s in enumerate_plays(&cp, 12) {
            if s.len() % 2 == 0 {
                let w = crate::constructions::side_projection(&g, &s, crate::constructions::Side::Left);
                let e = crate::constructions::side_projection(&g, &s, crate::constructions::Side::Right);
                assert_eq!(w.pos, e.pos);
            }
        }
    }

    #[test]
    fn dereliction_is_legal() {
        assert!(check_strategy(&dereliction(&lazy_nat_game()), 10).is_ok());
        assert!(check_strategy(&dereliction(&boolean_game()), 6).is_ok());
    }
}
