//! Arenas, games and legal positions.
//!
//! A game is an intensional object: a labelling function on moves plus an
//! executable membership predicate and a bounded enumerator of extensions.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::constructions as cons;
use crate::tags::{InnerTag, OuterTag, TagError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Substance {
    QHat,
    Q,
    Yes,
    No,
    Tt,
    Ff,
}

impl Substance {
    pub const ALL: [Substance; 6] = [
        Substance::QHat,
        Substance::Q,
        Substance::Yes,
        Substance::No,
        Substance::Tt,
        Substance::Ff,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Substance::QHat => "qhat",
            Substance::Q => "q",
            Substance::Yes => "yes",
            Substance::No => "no",
            Substance::Tt => "tt",
            Substance::Ff => "ff",
        }
    }

    pub fn from_name(s: &str) -> Option<Substance> {
        Substance::ALL.into_iter().find(|x| x.name() == s)
    }

    pub fn is_answer(self) -> bool {
        !matches!(self, Substance::QHat | Substance::Q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    pub sub: Substance,
    pub inner: InnerTag,
    pub outer: OuterTag,
}

impl Move {
    pub fn new(sub: Substance, inner: InnerTag, outer: OuterTag) -> Move {
        Move { sub, inner, outer }
    }

    /// A move of a base game: empty inner and outer tags.
    pub fn base(sub: Substance) -> Move {
        Move::new(sub, InnerTag::empty(), OuterTag::empty())
    }

    pub fn with_inner(&self, inner: InnerTag) -> Move {
        Move::new(self.sub, inner, self.outer.clone())
    }

    pub fn with_outer(&self, outer: OuterTag) -> Move {
        Move::new(self.sub, self.inner.clone(), outer)
    }

    /// Parses `<substance><letters>_{<tag>}`.
    pub fn parse(s: &str) -> Option<Move> {
        let (head, tag) = s.split_once("_{")?;
        let tag = tag.strip_suffix('}')?;
        let split = head.find(|c: char| c.is_ascii_uppercase()).unwrap_or(head.len());
        let sub = Substance::from_name(&head[..split])?;
        let inner = InnerTag::parse(&head[split..])?;
        let outer = OuterTag::parse(tag).ok()?;
        Some(Move::new(sub, inner, outer))
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}_{{{}}}", self.sub.name(), self.inner, self.outer)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pol {
    O,
    P,
}

impl Pol {
    pub fn flip(self) -> Pol {
        match self {
            Pol::O => Pol::P,
            Pol::P => Pol::O,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ext {
    E,
    I,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Label {
    pub pol: Pol,
    pub ext: Ext,
}

impl Label {
    pub const OE: Label = Label {
        pol: Pol::O,
        ext: Ext::E,
    };
    pub const PE: Label = Label {
        pol: Pol::P,
        ext: Ext::E,
    };

    pub fn flipped(self) -> Label {
        Label {
            pol: self.pol.flip(),
            ext: self.ext,
        }
    }

    pub fn internal(self) -> Label {
        Label {
            pol: self.pol,
            ext: Ext::I,
        }
    }

    pub fn is_internal(self) -> bool {
        self.ext == Ext::I
    }
}

/// A move occurrence with its justifier index (absent exactly for initial occurrences).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Occ {
    pub mv: Move,
    pub just: Option<usize>,
}

impl Occ {
    pub fn new(mv: Move, just: Option<usize>) -> Occ {
        Occ { mv, just }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Position(pub Vec<Occ>);

/// Index of an O-occurrence (0-based indices: O plays at even ones).
pub fn is_o_index(i: usize) -> bool {
    i.is_multiple_of(2)
}

impl Position {
    pub fn empty() -> Position {
        Position(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<&Occ> {
        self.0.last()
    }

    pub fn prefix(&self, k: usize) -> Position {
        Position(self.0[..k].to_vec())
    }

    pub fn extended(&self, o: Occ) -> Position {
        let mut v = self.0.clone();
        v.push(o);
        Position(v)
    }

    pub fn push(&mut self, o: Occ) {
        self.0.push(o);
    }

    pub fn just(&self, i: usize) -> Option<usize> {
        self.0[i].just
    }

    /// J-subsequence on the kept indices.
    pub fn j_subsequence(&self, keep: &[bool]) -> Projection {
        project_with(self, |i, o| if keep[i] { Some(o.mv.clone()) } else { None })
    }

    /// Indices of the P-view, oldest first.
    pub fn p_view_indices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        if self.is_empty() {
            return out;
        }
        let mut i = self.len() - 1;
        loop {
            out.push(i);
            if !is_o_index(i) {
                if i == 0 {
                    break;
                }
                i -= 1;
            } else {
                match self.0[i].just {
                    None => break,
                    Some(j) => {
                        out.push(j);
                        if j == 0 {
                            break;
                        }
                        i = j - 1;
                    }
                }
            }
        }
        out.reverse();
        out
    }

    /// Indices of the O-view, oldest first.
    pub fn o_view_indices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        if self.is_empty() {
            return out;
        }
        let mut i = self.len() - 1;
        loop {
            out.push(i);
            if is_o_index(i) {
                if i == 0 {
                    break;
                }
                i -= 1;
            } else {
                match self.0[i].just {
                    None => break,
                    Some(j) => {
                        out.push(j);
                        if j == 0 {
                            break;
                        }
                        i = j - 1;
                    }
                }
            }
        }
        out.reverse();
        out
    }

    pub fn p_view(&self) -> Position {
        self.sub_view(&self.p_view_indices())
    }

    pub fn o_view(&self) -> Position {
        self.sub_view(&self.o_view_indices())
    }

    /// The subsequence on `idx` with justifiers kept when they survive, undefined otherwise.
    fn sub_view(&self, idx: &[usize]) -> Position {
        let pos_of = |j: usize| idx.iter().position(|&x| x == j);
        Position(
            idx.iter()
                .map(|&i| Occ::new(self.0[i].mv.clone(), self.0[i].just.and_then(pos_of)))
                .collect(),
        )
    }

    /// The `k`-th last entry of the P-view (1 is the last), computed without
    /// materializing the whole view.
    pub fn view_entry_from_end(&self, k: usize) -> Option<usize> {
        if self.is_empty() || k == 0 {
            return None;
        }
        let mut i = self.len() - 1;
        let mut pending: Option<usize> = None;
        for step in 1..=k {
            let cur = match pending.take() {
                Some(p) => p,
                None => i,
            };
            if step == k {
                return Some(cur);
            }
            if is_o_index(cur) {
                let j = self.0[cur].just?;
                pending = Some(j);
                i = j;
            } else {
                if cur == 0 {
                    return None;
                }
                i = cur - 1;
            }
        }
        None
    }

    pub fn to_trace(&self) -> String {
        let mut out = String::new();
        for (i, o) in self.0.iter().enumerate() {
            let j = match o.just {
                Some(j) => (j + 1).to_string(),
                None => "init".to_string(),
            };
            out.push_str(&format!("{}: {} @{}\n", i + 1, o.mv, j));
        }
        out
    }

    pub fn parse_trace(text: &str) -> Result<Position, String> {
        let mut occs = Vec::new();
        for (n, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let err = |m: &str| format!("line {}: {}", n + 1, m);
            let (idx, rest) = line.split_once(": ").ok_or_else(|| err("missing index"))?;
            if idx.trim().parse::<usize>().ok() != Some(occs.len() + 1) {
                return Err(err("index out of sequence"));
            }
            let (mv, j) = rest.rsplit_once(" @").ok_or_else(|| err("missing justifier"))?;
            let mv = Move::parse(mv).ok_or_else(|| err("bad move"))?;
            let just = match j {
                "init" => None,
                k => Some(k.parse::<usize>().map_err(|_| err("bad justifier"))? - 1),
            };
            occs.push(Occ::new(mv, just));
        }
        Ok(Position(occs))
    }
}

/// A projected position together with the original index of each kept occurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    pub pos: Position,
    pub map: Vec<usize>,
}

impl Projection {
    /// Original index of projected index `k`.
    pub fn orig(&self, k: usize) -> usize {
        self.map[k]
    }

    /// Projected index of original index `i`, if kept.
    pub fn local(&self, i: usize) -> Option<usize> {
        self.map.binary_search(&i).ok()
    }
}

/// J-subsequence where `f` both selects and rewrites the kept occurrences.
pub fn project_with(s: &Position, f: impl Fn(usize, &Occ) -> Option<Move>) -> Projection {
    let mut new_index: Vec<Option<usize>> = vec![None; s.len()];
    let mut occs = Vec::new();
    let mut map = Vec::new();
    for (i, o) in s.0.iter().enumerate() {
        if let Some(m) = f(i, o) {
            new_index[i] = Some(occs.len());
            map.push(i);
            let mut j = o.just;
            let mut skipped = 0usize;
            while let Some(jj) = j {
                if new_index[jj].is_some() {
                    break;
                }
                j = s.0[jj].just;
                skipped += 1;
            }
            let just = match j {
                Some(jj) if skipped.is_multiple_of(2) => new_index[jj],
                _ => None,
            };
            occs.push(Occ::new(m, just));
        }
    }
    Projection {
        pos: Position(occs),
        map,
    }
}

pub fn project(s: &Position, f: impl Fn(&Move) -> Option<Move>) -> Projection {
    project_with(s, |_, o| f(&o.mv))
}

pub fn j_subsequence(s: &Position, keep: &[bool]) -> Position {
    s.j_subsequence(keep).pos
}

pub fn p_view(s: &Position) -> Position {
    s.p_view()
}

pub fn o_view(s: &Position) -> Position {
    s.o_view()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    Alt,
    Jus,
    Ei,
    Dum,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Alt => "Alt",
            Axiom::Jus => "Jus",
            Axiom::Ei => "EI",
            Axiom::Dum => "Dum",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("occurrence {index} is not a move of the arena")]
    UnknownMove { index: usize },
    #[error("axiom {axiom} violated at occurrence {index}")]
    Axiom { axiom: Axiom, index: usize },
    #[error("not a position of {game}: {reason}")]
    NotMember { game: &'static str, reason: String },
    #[error(transparent)]
    Tag(#[from] TagError),
}

pub(crate) fn not_member(game: &'static str, reason: impl Into<String>) -> Violation {
    Violation::NotMember {
        game,
        reason: reason.into(),
    }
}

#[derive(Debug)]
pub enum GameKind {
    Terminal,
    Boolean,
    Nat,
    Tensor(Game, Game),
    Product(Game, Game),
    Lin(Game, Game),
    Exp(Game),
    /// `J‡K`, with the middle game `B` kept for the copy-cat condition.
    Concat {
        j: Game,
        k: Game,
        b: Game,
    },
    Pair(Game, Game),
    Promote(Game),
    Curry(Game),
    Hide(Game),
}

#[derive(Clone, Debug)]
pub struct Game(pub Arc<GameKind>);

/// Bounds used by the witness search behind hidden games.
pub const HIDE_INTERNAL_RUN: usize = 12;
pub const HIDE_WITNESSES: usize = 64;
/// Fresh thread names tried per exponential while searching for a witness.
pub const HIDE_FRESH_SPAN: usize = 1;

pub fn terminal_game() -> Game {
    Game::new(GameKind::Terminal)
}

pub fn boolean_game() -> Game {
    Game::new(GameKind::Boolean)
}

pub fn lazy_nat_game() -> Game {
    Game::new(GameKind::Nat)
}

pub fn hide_game(g: &Game) -> Game {
    match &*g.0 {
        GameKind::Hide(_) => g.clone(),
        _ if g.is_normalized() => g.clone(),
        _ => Game::new(GameKind::Hide(g.clone())),
    }
}

impl Game {
    pub fn new(k: GameKind) -> Game {
        Game(Arc::new(k))
    }

    pub fn kind(&self) -> &GameKind {
        &self.0
    }

    /// True when no move of the arena is internal (decided structurally).
    pub fn is_normalized(&self) -> bool {
        match &*self.0 {
            GameKind::Terminal | GameKind::Boolean | GameKind::Nat | GameKind::Hide(_) => true,
            GameKind::Tensor(a, b) | GameKind::Product(a, b) | GameKind::Lin(a, b) => {
                a.is_normalized() && b.is_normalized()
            }
            GameKind::Exp(a) => a.is_normalized(),
            GameKind::Concat { .. } => false,
            GameKind::Pair(l, r) => l.is_normalized() && r.is_normalized(),
            GameKind::Promote(g) | GameKind::Curry(g) => g.is_normalized(),
        }
    }

    pub fn name(&self) -> &'static str {
        match &*self.0 {
            GameKind::Terminal => "T",
            GameKind::Boolean => "2",
            GameKind::Nat => "N",
            GameKind::Tensor(..) => "tensor",
            GameKind::Product(..) => "product",
            GameKind::Lin(..) => "linear implication",
            GameKind::Exp(..) => "exponential",
            GameKind::Concat { .. } => "concatenation",
            GameKind::Pair(..) => "pairing",
            GameKind::Promote(..) => "promotion",
            GameKind::Curry(..) => "currying",
            GameKind::Hide(..) => "hidden game",
        }
    }

    pub fn label(&self, m: &Move) -> Option<Label> {
        match &*self.0 {
            GameKind::Terminal => None,
            GameKind::Boolean => base_label(m, &[Substance::QHat], &[Substance::Tt, Substance::Ff]),
            GameKind::Nat => base_label(m, &[Substance::QHat, Substance::Q], &[Substance::Yes, Substance::No]),
            GameKind::Hide(g) => g.label(m).filter(|l| !l.is_internal()),
            _ => cons::label(self, m),
        }
    }

    pub fn is_move(&self, m: &Move) -> bool {
        self.label(m).is_some()
    }

    pub fn is_initial(&self, m: &Move) -> bool {
        match &*self.0 {
            GameKind::Terminal => false,
            GameKind::Boolean | GameKind::Nat => m.sub == Substance::QHat && self.label(m).is_some(),
            GameKind::Hide(g) => g.is_initial(m),
            _ => cons::is_initial(self, m),
        }
    }

    /// `Δ` on internal P-moves.
    pub fn dummy(&self, m: &Move) -> Option<Move> {
        match &*self.0 {
            GameKind::Terminal | GameKind::Boolean | GameKind::Nat | GameKind::Hide(_) => None,
            _ => cons::dummy(self, m),
        }
    }

    /// Number of `⟅⁰…⟆⁰ℏ` groups that open the outer tag of `m`; determined by the
    /// inner element alone.
    pub fn tag_groups(&self, m: &Move) -> Option<usize> {
        match &*self.0 {
            GameKind::Terminal => None,
            GameKind::Boolean | GameKind::Nat => self.label(&m.with_outer(OuterTag::empty())).map(|_| 0),
            GameKind::Hide(g) => g.tag_groups(m),
            _ => cons::tag_groups(self, m),
        }
    }

    /// Membership in `P_G`, including the legality axioms.
    pub fn accepts(&self, s: &Position) -> Result<(), Violation> {
        check_legal(self, s)?;
        self.structure(s)
    }

    pub fn contains(&self, s: &Position) -> bool {
        self.accepts(s).is_ok()
    }

    /// The game-specific part of membership; assumes `check_legal` passed.
    fn structure(&self, s: &Position) -> Result<(), Violation> {
        match &*self.0 {
            GameKind::Terminal => {
                if s.is_empty() {
                    Ok(())
                } else {
                    Err(not_member("T", "T has no moves"))
                }
            }
            GameKind::Boolean => {
                let ok = match s.len() {
                    0 => true,
                    1 => s.0[0].mv.sub == Substance::QHat,
                    2 => s.0[0].mv.sub == Substance::QHat && s.0[1].just == Some(0),
                    _ => false,
                };
                if ok {
                    Ok(())
                } else {
                    Err(not_member("2", "expected a prefix of q̂·tt or q̂·ff"))
                }
            }
            GameKind::Nat => nat_structure(s),
            GameKind::Hide(g) => {
                if hidden_witness(g, s).is_some() {
                    Ok(())
                } else {
                    Err(not_member("hidden game", "no witness found within the search bound"))
                }
            }
            _ => cons::structure(self, s),
        }
    }

    /// All `m` (with justifier) such that `s·m` is accepted; fresh threads are
    /// opened only under the smallest unused canonical name.
    pub fn extensions(&self, s: &Position) -> Vec<Occ> {
        let cands = match &*self.0 {
            GameKind::Terminal => Vec::new(),
            GameKind::Boolean => {
                if s.is_empty() {
                    vec![Occ::new(Move::base(Substance::QHat), None)]
                } else if s.len() == 1 {
                    vec![
                        Occ::new(Move::base(Substance::Tt), Some(0)),
                        Occ::new(Move::base(Substance::Ff), Some(0)),
                    ]
                } else {
                    Vec::new()
                }
            }
            GameKind::Nat => match s.last() {
                None => vec![Occ::new(Move::base(Substance::QHat), None)],
                Some(o) => {
                    let j = Some(s.len() - 1);
                    match o.mv.sub {
                        Substance::QHat | Substance::Q => vec![
                            Occ::new(Move::base(Substance::Yes), j),
                            Occ::new(Move::base(Substance::No), j),
                        ],
                        Substance::Yes => vec![Occ::new(Move::base(Substance::Q), j)],
                        _ => Vec::new(),
                    }
                }
            },
            GameKind::Hide(g) => hidden_extensions(g, s),
            _ => cons::candidates(self, s),
        };
        let mut seen = HashSet::new();
        cands
            .into_iter()
            .filter(|o| seen.insert(o.clone()))
            .filter(|o| self.accepts(&s.extended(o.clone())).is_ok())
            .collect()
    }
}

fn base_label(m: &Move, o_moves: &[Substance], p_moves: &[Substance]) -> Option<Label> {
    if !m.inner.is_empty() || !m.outer.is_empty() {
        return None;
    }
    if o_moves.contains(&m.sub) {
        Some(Label::OE)
    } else if p_moves.contains(&m.sub) {
        Some(Label::PE)
    } else {
        None
    }
}

fn nat_structure(s: &Position) -> Result<(), Violation> {
    for (i, o) in s.0.iter().enumerate() {
        let expect: &[Substance] = if i == 0 {
            &[Substance::QHat]
        } else if i % 2 == 0 {
            &[Substance::Q]
        } else {
            &[Substance::Yes, Substance::No]
        };
        if !expect.contains(&o.mv.sub) {
            return Err(not_member("N", format!("unexpected move at {i}")));
        }
        if i > 0 && o.just != Some(i - 1) {
            return Err(not_member(
                "N",
                format!("justifier of {i} is not the previous occurrence"),
            ));
        }
        if o.mv.sub == Substance::No && i + 1 != s.len() {
            return Err(not_member("N", "moves after no"));
        }
    }
    Ok(())
}

/// Checks Alt, Jus, EI and Dum.
pub fn check_legal(g: &Game, s: &Position) -> Result<(), Violation> {
    let mut labels = Vec::with_capacity(s.len());
    for (i, o) in s.0.iter().enumerate() {
        let l = g.label(&o.mv).ok_or(Violation::UnknownMove { index: i })?;
        labels.push(l);
    }
    let ax = |axiom, index| Violation::Axiom { axiom, index };
    for (i, o) in s.0.iter().enumerate() {
        let l = labels[i];
        if (l.pol == Pol::O) != is_o_index(i) {
            return Err(ax(Axiom::Alt, i));
        }
        let initial = g.is_initial(&o.mv);
        match o.just {
            None => {
                if !initial {
                    return Err(ax(Axiom::Jus, i));
                }
            }
            Some(j) => {
                if initial || j >= i || is_o_index(j) == is_o_index(i) {
                    return Err(ax(Axiom::Jus, i));
                }
                if labels[j].ext != l.ext && l.pol != Pol::P {
                    return Err(ax(Axiom::Jus, i));
                }
            }
        }
        if i > 0 && labels[i - 1].ext != l.ext && labels[i - 1].pol != Pol::O {
            return Err(ax(Axiom::Ei, i));
        }
        if l.pol == Pol::O && l.is_internal() {
            let p2 = i.checked_sub(1).ok_or(ax(Axiom::Dum, i))?;
            if g.dummy(&s.0[p2].mv).as_ref() != Some(&o.mv) {
                return Err(ax(Axiom::Dum, i));
            }
            if o.just.is_none() || o.just != dum_justifier(g, &s.prefix(i)) {
                return Err(ax(Axiom::Dum, i));
            }
        }
    }
    Ok(())
}

/// The forced internal O-move after an internal P-move ending `s`, if any.
pub fn forced_dummy(g: &Game, s: &Position) -> Option<Occ> {
    let p2 = s.len().checked_sub(1)?;
    let last = &s.0[p2];
    let l = g.label(&last.mv)?;
    if l.pol != Pol::P || !l.is_internal() {
        return None;
    }
    let mv = g.dummy(&last.mv)?;
    Some(Occ::new(mv, Some(dum_justifier(g, s)?)))
}

/// Justifier of the dummy answering the internal P-move that ends `s`. A dummy
/// produced inside a component is placed by that component's own rule.
pub fn dum_justifier(g: &Game, s: &Position) -> Option<usize> {
    let p2 = s.len().checked_sub(1)?;
    dum_in(g, s, &|i| Some(s.0[i].mv.clone()), p2)
}

/// A sub-sequence of a position given by membership: the occurrence's move as
/// seen by the sub-game, if it belongs to it.
pub(crate) type View<'a> = dyn Fn(usize) -> Option<Move> + 'a;

/// Justifier of occurrence `i` inside the view.
pub(crate) fn view_just(s: &Position, view: &View<'_>, i: usize) -> Option<usize> {
    let mut a = s.0[i].just;
    while let Some(j) = a {
        if view(j).is_some() {
            return Some(j);
        }
        a = s.0[j].just;
    }
    None
}

pub(crate) fn dum_in(g: &Game, s: &Position, view: &View<'_>, p2: usize) -> Option<usize> {
    match &*g.0 {
        GameKind::Terminal | GameKind::Boolean | GameKind::Nat | GameKind::Hide(_) => {
            // s = t.p.o'.u.p'.o with o' = J(p'): J(o) = p if o' is internal, p' otherwise
            let o2 = view_just(s, view, p2)?;
            if g.label(&view(o2)?)?.is_internal() {
                (0..o2).rev().find(|&j| view(j).is_some())
            } else {
                Some(p2)
            }
        }
        _ => cons::dum_in(g, s, view, p2),
    }
}

/// `ℋ^ω`: the j-subsequence of external occurrences.
pub fn hide_position(g: &Game, s: &Position) -> Projection {
    project(s, |m| match g.label(m) {
        Some(l) if !l.is_internal() => Some(m.clone()),
        _ => None,
    })
}

/// A position of `g` whose hiding is `s`, found by bounded search.
pub fn hidden_witness(g: &Game, s: &Position) -> Option<Position> {
    let mut found = Vec::new();
    let hints = s.0.iter().flat_map(|o| o.mv.outer.group_contents()).collect();
    cons::with_fresh_names(HIDE_FRESH_SPAN, hints, || {
        witness_search(g, s, &Position::empty(), 0, 0, &mut found, 1)
    });
    found.pop()
}

/// Extends `t` (a witness for `s[..k]`) to witnesses of the whole of `s`.
fn witness_search(g: &Game, s: &Position, t: &Position, k: usize, run: usize, found: &mut Vec<Position>, limit: usize) {
    if found.len() >= limit {
        return;
    }
    if k == s.len() {
        found.push(t.clone());
        return;
    }
    if run > HIDE_INTERNAL_RUN {
        return;
    }
    for o in g.extensions(t) {
        let l = match g.label(&o.mv) {
            Some(l) => l,
            None => continue,
        };
        let t2 = t.extended(o.clone());
        if l.is_internal() {
            witness_search(g, s, &t2, k, run + 1, found, limit);
        } else {
            let h = hide_position(g, &t2);
            if h.pos.0.last() == Some(&s.0[k]) {
                witness_search(g, s, &t2, k + 1, 0, found, limit);
            }
        }
        if found.len() >= limit {
            return;
        }
    }
}

fn hidden_extensions(g: &Game, s: &Position) -> Vec<Occ> {
    let mut witnesses = Vec::new();
    witness_search(g, s, &Position::empty(), 0, 0, &mut witnesses, HIDE_WITNESSES);
    let mut out = Vec::new();
    for t in witnesses {
        collect_external_next(g, &t, 0, &mut out);
    }
    out
}

fn collect_external_next(g: &Game, t: &Position, run: usize, out: &mut Vec<Occ>) {
    if run > HIDE_INTERNAL_RUN {
        return;
    }
    for o in g.extensions(t) {
        let t2 = t.extended(o.clone());
        match g.label(&o.mv) {
            Some(l) if l.is_internal() => collect_external_next(g, &t2, run + 1, out),
            Some(_) => {
                let h = hide_position(g, &t2);
                if let Some(last) = h.pos.0.last() {
                    out.push(last.clone());
                }
            }
            None => {}
        }
    }
}

/// All positions of `g` up to length `depth`.
pub fn enumerate_positions(g: &Game, depth: usize) -> Vec<Position> {
    let mut out = vec![Position::empty()];
    let mut frontier = vec![Position::empty()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for s in &frontier {
            for o in g.extensions(s) {
                next.push(s.extended(o));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// `h ⊴ g` checked on every position of `h` up to length `depth`.
pub fn is_subgame(h: &Game, g: &Game, depth: usize) -> bool {
    for s in enumerate_positions(h, depth) {
        for o in &s.0 {
            if h.label(&o.mv) != g.label(&o.mv) || h.dummy(&o.mv) != g.dummy(&o.mv) {
                return false;
            }
        }
        if g.accepts(&s).is_err() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn occ(sub: Substance, just: Option<usize>) -> Occ {
        Occ::new(Move::base(sub), just)
    }

    #[test]
    fn boolean_positions() {
        let g = boolean_game();
        assert!(g.contains(&Position::empty()));
        let s = Position(vec![occ(Substance::QHat, None), occ(Substance::Tt, Some(0))]);
        assert!(g.contains(&s));
        let bad = Position(vec![occ(Substance::QHat, None), occ(Substance::Tt, None)]);
        assert_eq!(
            g.accepts(&bad),
            Err(Violation::Axiom {
                axiom: Axiom::Jus,
                index: 1
            })
        );
        let long = s.extended(occ(Substance::QHat, None));
        assert!(!g.contains(&long));
    }

    #[test]
    fn nat_positions() {
        let g = lazy_nat_game();
        let s = Position(vec![
            occ(Substance::QHat, None),
            occ(Substance::Yes, Some(0)),
            occ(Substance::Q, Some(1)),
            occ(Substance::No, Some(2)),
        ]);
        assert!(g.contains(&s));
        let wrong = Position(vec![occ(Substance::QHat, None), occ(Substance::Tt, Some(0))]);
        assert_eq!(g.accepts(&wrong), Err(Violation::UnknownMove { index: 1 }));
        assert_eq!(enumerate_positions(&g, 4).len(), 1 + 1 + 2 + 1 + 2);
    }

    #[test]
    fn terminal_only_empty() {
        let g = terminal_game();
        assert!(g.contains(&Position::empty()));
        assert_eq!(enumerate_positions(&g, 5).len(), 1);
    }

    fn chain(n: usize, justs: &[Option<usize>]) -> Position {
        let subs = [Substance::QHat, Substance::Yes];
        Position((0..n).map(|i| occ(subs[i % 2], justs[i])).collect())
    }

    #[test]
    fn j_subsequence_chains() {
        // m <- x <- y <- m' : deleting x and y keeps m justified by m'
        let s = chain(4, &[None, Some(0), Some(1), Some(2)]);
        let kept = s.j_subsequence(&[true, false, false, true]);
        assert_eq!(kept.pos.0[1].just, Some(0));
        let odd = s.j_subsequence(&[true, false, true, true]);
        assert_eq!(odd.pos.0[1].just, None);
        assert_eq!(s.j_subsequence(&[true; 4]).pos, s);
        assert!(s.j_subsequence(&[false; 4]).pos.is_empty());
    }

    #[test]
    fn views() {
        let s = chain(3, &[None, Some(0), Some(1)]);
        assert_eq!(s.p_view(), s);
        let s = chain(5, &[None, Some(0), Some(1), Some(2), Some(1)]);
        assert_eq!(s.p_view_indices(), vec![0, 1, 4]);
        assert_eq!(s.view_entry_from_end(1), Some(4));
        assert_eq!(s.view_entry_from_end(2), Some(1));
        assert_eq!(s.view_entry_from_end(3), Some(0));
        assert_eq!(s.view_entry_from_end(4), None);
        let s = chain(4, &[None, Some(0), Some(1), Some(0)]);
        assert_eq!(s.o_view_indices(), vec![0, 3]);
        assert_eq!(chain(2, &[None, Some(0)]).o_view_indices(), vec![0, 1]);
        assert!(Position::empty().p_view().is_empty());
    }

    #[test]
    fn trace_round_trip() {
        let s = chain(3, &[None, Some(0), Some(1)]);
        let text = s.to_trace();
        assert_eq!(text.lines().next(), Some("1: qhat_{} @init"));
        assert_eq!(Position::parse_trace(&text).unwrap(), s);
    }
}
