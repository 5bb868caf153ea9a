//! The atomic strategies of DPCF, plus numeral and boolean constants used as
//! test inputs.

use std::fmt;

use crate::constructions::implication;
use crate::games::{Game, Move, Pol, Position, Substance};
use crate::strategies::{Relay, Response, Selector, Strategy, StrategyImpl};
use crate::tags::{InnerTag, Letter, OuterTag, TagToken};

use super::Ty;
use Letter::{E, W};
use Substance::{No, QHat, Yes, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    /// `zero_A : A ⇒ 𝒩`.
    Zero(Ty),
    Succ,
    Pred,
    IfZero,
    /// `case_A : (A & A) & 2 ⇒ A`.
    Case(Ty),
    /// `fix_A : (A ⇒ A) ⇒ A`.
    Fix(Ty),
    /// Projection out of a product context; the path lists product letters
    /// innermost first. The empty path is dereliction.
    Proj {
        dom: Ty,
        path: Vec<Letter>,
    },
    /// `ev : (A ⇒ B) & A ⇒ B`.
    Ev(Ty, Ty),
    /// `n̲ : T ⇒ 𝒩`.
    Numeral(u64),
    /// `tt̲`, `ff̲ : T ⇒ 2`.
    Bool(bool),
}

impl Atom {
    /// Domain and codomain types.
    pub fn signature(&self) -> Option<(Ty, Ty)> {
        Some(match self {
            Atom::Zero(a) => (a.clone(), Ty::Nat),
            Atom::Succ | Atom::Pred => (Ty::Nat, Ty::Nat),
            Atom::IfZero => (Ty::Nat, Ty::Bool),
            Atom::Case(a) => (Ty::prod(Ty::prod(a.clone(), a.clone()), Ty::Bool), a.clone()),
            Atom::Fix(a) => (Ty::arrow(a.clone(), a.clone()), a.clone()),
            Atom::Proj { dom, path } => (dom.clone(), dom.at_path(path)?.clone()),
            Atom::Ev(a, b) => (Ty::prod(Ty::arrow(a.clone(), b.clone()), a.clone()), b.clone()),
            Atom::Numeral(_) => (Ty::Unit, Ty::Nat),
            Atom::Bool(_) => (Ty::Unit, Ty::Bool),
        })
    }

    pub fn game(&self) -> Option<Game> {
        let (a, b) = self.signature()?;
        Some(implication(&a.game(), &b.game()))
    }

    /// Numerals and booleans are conveniences outside the DPCF generators.
    pub fn is_dpcf(&self) -> bool {
        !matches!(self, Atom::Numeral(_) | Atom::Bool(_))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Zero(a) => write!(f, "zero[{a}]"),
            Atom::Succ => write!(f, "succ"),
            Atom::Pred => write!(f, "pred"),
            Atom::IfZero => write!(f, "zero?"),
            Atom::Case(a) => write!(f, "case[{a}]"),
            Atom::Fix(a) => write!(f, "fix[{a}]"),
            Atom::Proj { dom, path } if path.is_empty() => write!(f, "der[{dom}]"),
            Atom::Proj { dom, path } => {
                write!(f, "proj{}[{dom}]", InnerTag(path.clone()))
            }
            Atom::Ev(a, b) => write!(f, "ev[{a}, {b}]"),
            Atom::Numeral(n) => write!(f, "{n}"),
            Atom::Bool(true) => write!(f, "tt"),
            Atom::Bool(false) => write!(f, "ff"),
        }
    }
}

fn eps() -> OuterTag {
    OuterTag::empty()
}

/// `⟅⁰⟆⁰ℏ`, the thread of every atomic query into its argument.
fn th0() -> OuterTag {
    OuterTag::wrap(&eps(), &eps())
}

fn mv(sub: Substance, inner: InnerTag, outer: OuterTag) -> Move {
    Move::new(sub, inner, outer)
}

fn letters(ls: &[Letter]) -> InnerTag {
    InnerTag(ls.to_vec())
}

/// `ℓℏf`.
fn arg_thread(f: &OuterTag) -> OuterTag {
    OuterTag(vec![TagToken::L, TagToken::H]).concat(f)
}

fn strip_arg_thread(t: &OuterTag) -> Option<OuterTag> {
    match t.0.as_slice() {
        [TagToken::L, TagToken::H, rest @ ..] => Some(OuterTag(rest.to_vec())),
        _ => None,
    }
}

fn resp(mv: Move, just: usize, sel: Selector) -> Option<Response> {
    Some(Response { mv, just, sel })
}

struct AtomStrategy {
    atom: Atom,
    game: Game,
    /// The game `A` of `case_A` and `fix_A`.
    param: Option<Game>,
}

impl AtomStrategy {
    fn succ(s: &Position, n: usize) -> Option<Response> {
        let o = s.last()?;
        match (o.mv.inner.last()?, o.just) {
            (E, None) => resp(mv(QHat, letters(&[W]), th0()), n - 1, Selector::I),
            (W, Some(j)) if s.0[j].mv.sub == QHat => resp(mv(Yes, letters(&[E]), eps()), 0, Selector::II),
            (W, Some(j)) => resp(mv(Yes, letters(&[E]), eps()), j - 1, Selector::III),
            (E, Some(j)) => match s.0[j - 1].mv.sub {
                Yes => resp(mv(Q, letters(&[W]), th0()), j - 1, Selector::III),
                No => resp(mv(No, letters(&[E]), eps()), n - 1, Selector::I),
                _ => None,
            },
            _ => None,
        }
    }

    fn pred(s: &Position, n: usize) -> Option<Response> {
        let o = s.last()?;
        match (o.mv.inner.last()?, o.just) {
            (E, None) => resp(mv(QHat, letters(&[W]), th0()), n - 1, Selector::I),
            (W, Some(j)) if s.0[j].mv.sub == QHat => match o.mv.sub {
                Yes => resp(mv(Q, letters(&[W]), th0()), n - 1, Selector::I),
                No => resp(mv(No, letters(&[E]), eps()), 0, Selector::II),
                _ => None,
            },
            (W, Some(j)) => {
                let ans = mv(o.mv.sub, letters(&[E]), eps());
                if s.0[j - 1].mv.inner.last() == Some(W) {
                    resp(ans, 0, Selector::V)
                } else {
                    resp(ans, j - 1, Selector::III)
                }
            }
            (E, Some(j)) => resp(mv(Q, letters(&[W]), th0()), j - 1, Selector::III),
            _ => None,
        }
    }

    fn ifzero(s: &Position, n: usize) -> Option<Response> {
        let o = s.last()?;
        match (o.mv.inner.last()?, o.mv.sub) {
            (E, QHat) => resp(mv(QHat, letters(&[W]), th0()), n - 1, Selector::I),
            (W, No) => resp(mv(Substance::Tt, letters(&[E]), eps()), 0, Selector::II),
            (W, Yes) => resp(mv(Substance::Ff, letters(&[E]), eps()), 0, Selector::II),
            _ => None,
        }
    }

    fn case(s: &Position, n: usize) -> Option<Response> {
        let o = s.last()?;
        let first = &s.0[0].mv;
        let g = &first.outer;
        if n == 1 {
            let t = OuterTag::wrap(&arg_thread(g), &eps());
            return resp(mv(QHat, letters(&[E, W]), t), 0, Selector::I);
        }
        let b = match s.0[2].mv.sub {
            Substance::Tt => W,
            Substance::Ff => E,
            _ => return None,
        };
        if n == 3 {
            let a = first.inner.strip(E)?.extend(&[b, W, W]);
            return resp(mv(first.sub, a, OuterTag::wrap(&eps(), g)), 0, Selector::II);
        }
        let j = o.just?;
        match o.mv.inner.last()? {
            E => {
                let x = o.mv.inner.strip(E)?.extend(&[b, W, W]);
                resp(
                    mv(o.mv.sub, x, OuterTag::wrap(&eps(), &o.mv.outer)),
                    j - 1,
                    Selector::III,
                )
            }
            W => {
                let (t, e) = o.mv.outer.unwrap_group()?;
                if !t.is_empty() {
                    return None;
                }
                let x = o.mv.inner.strip_suffix(&[b, W, W])?.push(E);
                if j == 3 {
                    resp(mv(o.mv.sub, x, e), 0, Selector::II)
                } else {
                    resp(mv(o.mv.sub, x, e), j - 1, Selector::III)
                }
            }
            _ => None,
        }
    }

    fn fix(&self, s: &Position, n: usize) -> Option<Response> {
        let a_game = self.param.as_ref()?;
        let o = s.last()?;
        let m = &o.mv;
        if n == 1 {
            let x = m.inner.strip(E)?.extend(&[E, W]);
            return resp(mv(m.sub, x, OuterTag::wrap(&eps(), &m.outer)), 0, Selector::I);
        }
        let j = o.just?;
        match (m.inner.from_end(1)?, m.inner.last()?) {
            (W, W) => {
                let (e1, rest) = m.outer.unwrap_group()?;
                let (e, f) = rest.unwrap_group()?;
                let a = m.inner.strip_suffix(&[W, W])?;
                let out = mv(
                    m.sub,
                    a.extend(&[E, W]),
                    OuterTag::wrap(&OuterTag::pair_id(&e1, &e), &f),
                );
                if a_game.is_initial(&mv(m.sub, a, f)) {
                    resp(out, s.just(j)?, Selector::II)
                } else {
                    resp(out, j - 1, Selector::III)
                }
            }
            (E, W) => {
                let (t, f) = m.outer.unwrap_group()?;
                let a = m.inner.strip_suffix(&[E, W])?;
                if t.is_empty() {
                    resp(mv(m.sub, a.push(E), f), j - 1, Selector::III)
                } else {
                    let (e1, e) = t.split_pair_id()?;
                    let outer = OuterTag::wrap(&e1, &OuterTag::wrap(&e, &f));
                    resp(mv(m.sub, a.extend(&[W, W]), outer), j - 1, Selector::III)
                }
            }
            (_, E) => {
                let a = m.inner.strip(E)?.extend(&[E, W]);
                resp(mv(m.sub, a, OuterTag::wrap(&eps(), &m.outer)), j - 1, Selector::III)
            }
            _ => None,
        }
    }

    fn constant(s: &Position, n: usize, answer: impl Fn(usize) -> Substance) -> Option<Response> {
        let o = s.last()?;
        if o.mv.inner.last()? != E || !matches!(o.mv.sub, QHat | Q) {
            return None;
        }
        let yeses = s.0.iter().filter(|x| x.mv.sub == Yes).count();
        resp(mv(answer(yeses), letters(&[E]), eps()), n - 1, Selector::I)
    }
}

impl StrategyImpl for AtomStrategy {
    fn game(&self) -> &Game {
        &self.game
    }

    fn respond(&self, s: &Position) -> Option<Response> {
        let n = s.len();
        if n.is_multiple_of(2) || self.game.label(&s.last()?.mv)?.pol != Pol::O {
            return None;
        }
        match &self.atom {
            Atom::Zero(_) if n == 1 => resp(mv(No, letters(&[E]), eps()), 0, Selector::I),
            Atom::Zero(_) => None,
            Atom::Succ => Self::succ(s, n),
            Atom::Pred => Self::pred(s, n),
            Atom::IfZero => Self::ifzero(s, n),
            Atom::Case(_) => Self::case(s, n),
            Atom::Fix(_) => self.fix(s, n),
            Atom::Numeral(k) => {
                let k = *k as usize;
                Self::constant(s, n, |y| if y < k { Yes } else { No })
            }
            Atom::Bool(b) if n == 1 => {
                let sub = if *b { Substance::Tt } else { Substance::Ff };
                resp(mv(sub, letters(&[E]), eps()), 0, Selector::I)
            }
            Atom::Bool(_) => None,
            Atom::Proj { .. } | Atom::Ev(..) => None,
        }
    }

    fn name(&self) -> String {
        self.atom.to_string()
    }
}

fn proj_copy(path: Vec<Letter>) -> impl Fn(&Move) -> Option<Move> + Send + Sync {
    move |m| match m.inner.last()? {
        E => {
            let x = m.inner.strip(E)?.extend(&path).push(W);
            Some(mv(m.sub, x, OuterTag::wrap(&eps(), &m.outer)))
        }
        W => {
            let (f, e) = m.outer.unwrap_group()?;
            if !f.is_empty() {
                return None;
            }
            let x = m.inner.strip(W)?.strip_suffix(&path)?.push(E);
            Some(mv(m.sub, x, e))
        }
        _ => None,
    }
}

fn ev_copy(m: &Move) -> Option<Move> {
    match m.inner.last()? {
        E => {
            let x = m.inner.strip(E)?.extend(&[E, W, W]);
            Some(mv(m.sub, x, OuterTag::wrap(&eps(), &m.outer)))
        }
        W => {
            let (t, rest) = m.outer.unwrap_group()?;
            let x = m.inner.strip(W)?;
            match x.last()? {
                // the function component
                W => {
                    if !t.is_empty() {
                        return None;
                    }
                    let y = x.strip(W)?;
                    match y.last()? {
                        E => Some(mv(m.sub, y, rest)),
                        W => {
                            let (f, e) = rest.unwrap_group()?;
                            let a = y.strip(W)?.extend(&[E, W]);
                            Some(mv(m.sub, a, OuterTag::wrap(&arg_thread(&f), &e)))
                        }
                        _ => None,
                    }
                }
                // the argument component
                E => {
                    let f = strip_arg_thread(&t)?;
                    let a = x.strip(E)?.extend(&[W, W, W]);
                    Some(mv(m.sub, a, OuterTag::wrap(&eps(), &OuterTag::wrap(&f, &rest))))
                }
                _ => None,
            }
        }
        _ => None,
    }
}

/// The strategy of an atom. Panics on a projection path that does not fit its domain.
pub fn atom_strategy(atom: &Atom) -> Strategy {
    let game = atom.game().unwrap_or_else(|| panic!("ill-formed atom {atom}"));
    let name = atom.to_string();
    match atom {
        Atom::Proj { path, .. } => Strategy::new(Relay::new(game, &name, proj_copy(path.clone()))),
        Atom::Ev(..) => Strategy::new(Relay::new(game, &name, ev_copy)),
        Atom::Case(a) | Atom::Fix(a) => Strategy::new(AtomStrategy {
            atom: atom.clone(),
            game,
            param: Some(a.game()),
        }),
        _ => Strategy::new(AtomStrategy {
            atom: atom.clone(),
            game,
            param: None,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{compose, exponential, pair_strategies, promote_strategy};
    use crate::games::Occ;
    use crate::strategies::{check_strategy, same_behaviour};

    fn m(sub: Substance, inner: &str, outer: &str) -> Move {
        Move::new(sub, InnerTag::parse(inner).unwrap(), OuterTag::parse(outer).unwrap())
    }

    fn pos(items: &[(Move, Option<usize>)]) -> Position {
        Position(items.iter().map(|(x, j)| Occ::new(x.clone(), *j)).collect())
    }

    fn numeral(n: u64) -> Strategy {
        atom_strategy(&Atom::Numeral(n))
    }

    fn after(n: u64, atom: Atom) -> Strategy {
        compose(
            &promote_strategy(&numeral(n)),
            &atom_strategy(&atom),
            &exponential(&Ty::Nat.game()),
        )
    }

    #[test]
    fn succ_opening_moves() {
        let succ = atom_strategy(&Atom::Succ);
        let s = pos(&[(m(QHat, "E", ""), None)]);
        let r = succ.respond(&s).unwrap();
        assert_eq!((r.mv, r.just, r.sel), (m(QHat, "W", "[0 ]0 h"), 0, Selector::I));
        let s = pos(&[
            (m(QHat, "E", ""), None),
            (m(QHat, "W", "[0 ]0 h"), Some(0)),
            (m(No, "W", "[0 ]0 h"), Some(1)),
        ]);
        let r = succ.respond(&s).unwrap();
        assert_eq!((r.mv, r.just, r.sel), (m(Yes, "E", ""), 0, Selector::II));
    }

    #[test]
    fn pred_and_ifzero_tables() {
        let opening = |x: Substance| {
            pos(&[
                (m(QHat, "E", ""), None),
                (m(QHat, "W", "[0 ]0 h"), Some(0)),
                (m(x, "W", "[0 ]0 h"), Some(1)),
            ])
        };
        let pred = atom_strategy(&Atom::Pred);
        let r = pred.respond(&opening(No)).unwrap();
        assert_eq!((r.mv, r.sel), (m(No, "E", ""), Selector::II));
        let r = pred.respond(&opening(Yes)).unwrap();
        assert_eq!((r.mv, r.just, r.sel), (m(Q, "W", "[0 ]0 h"), 2, Selector::I));
        let z = atom_strategy(&Atom::IfZero);
        assert_eq!(z.respond(&opening(No)).unwrap().mv, m(Substance::Tt, "E", ""));
        assert_eq!(z.respond(&opening(Yes)).unwrap().mv, m(Substance::Ff, "E", ""));
    }

    #[test]
    fn atoms_are_legal() {
        let atoms = [
            Atom::Zero(Ty::Unit),
            Atom::Zero(Ty::Nat),
            Atom::Succ,
            Atom::Pred,
            Atom::IfZero,
            Atom::Numeral(3),
            Atom::Bool(false),
            Atom::Case(Ty::Nat),
            Atom::Case(Ty::Bool),
            Atom::Fix(Ty::Nat),
            Atom::Proj {
                dom: Ty::Nat,
                path: vec![],
            },
            Atom::Proj {
                dom: Ty::prod(Ty::Nat, Ty::Bool),
                path: vec![E],
            },
            Atom::Ev(Ty::Nat, Ty::Nat),
        ];
        for a in atoms {
            assert!(check_strategy(&atom_strategy(&a), 12).is_ok(), "{a}");
        }
        assert!(check_strategy(&atom_strategy(&Atom::Fix(Ty::arrow(Ty::Nat, Ty::Nat))), 10).is_ok());
    }

    #[test]
    fn successor_and_predecessor_of_numerals() {
        for n in 0..=4u64 {
            let d = 2 * n as usize + 6;
            assert!(same_behaviour(&after(n, Atom::Succ), &numeral(n + 1), d).unwrap() > 0);
            assert!(same_behaviour(&numeral(n + 1), &after(n, Atom::Succ), d).is_ok());
            let p = numeral(n.saturating_sub(1));
            assert!(same_behaviour(&after(n, Atom::Pred), &p, d).unwrap() > 0);
            assert!(same_behaviour(&p, &after(n, Atom::Pred), d).is_ok());
        }
    }

    #[test]
    fn zero_test_of_numerals() {
        for n in 0..=3u64 {
            let want = atom_strategy(&Atom::Bool(n == 0));
            assert!(same_behaviour(&after(n, Atom::IfZero), &want, 4).unwrap() > 0);
            assert!(same_behaviour(&want, &after(n, Atom::IfZero), 4).is_ok());
        }
    }

    #[test]
    fn case_selects_branch() {
        for b in [true, false] {
            let branches = pair_strategies(&numeral(2), &numeral(5));
            let input = promote_strategy(&pair_strategies(&branches, &atom_strategy(&Atom::Bool(b))));
            let mid = exponential(&Ty::prod(Ty::prod(Ty::Nat, Ty::Nat), Ty::Bool).game());
            let c = compose(&input, &atom_strategy(&Atom::Case(Ty::Nat)), &mid);
            let want = numeral(if b { 2 } else { 5 });
            assert!(same_behaviour(&c, &want, 10).unwrap() > 0);
            assert!(same_behaviour(&want, &c, 10).is_ok());
        }
    }
}
