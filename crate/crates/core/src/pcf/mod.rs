//! PCF: types, terms, the atomic strategies and the DPCF combinators.

use std::fmt;

use crate::constructions::{implication, product};
use crate::games::{boolean_game, lazy_nat_game, terminal_game, Game};
use crate::tags::Letter;

pub mod atoms;
pub mod denote;
pub mod dpcf;
pub mod syntax;
pub mod typing;

pub use atoms::{atom_strategy, Atom};
pub use denote::{context_type, denote, denote_in, denote_source, FrontError};
pub use dpcf::{materialize, signature, Desc, DpcfError};
pub use syntax::{parse_term, parse_type, Term, TermKind};
pub use typing::{typecheck, Typed, TypedKind};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ty {
    Nat,
    Bool,
    Unit,
    Arrow(Box<Ty>, Box<Ty>),
    Prod(Box<Ty>, Box<Ty>),
}

impl Ty {
    pub fn arrow(a: Ty, b: Ty) -> Ty {
        Ty::Arrow(Box::new(a), Box::new(b))
    }

    pub fn prod(a: Ty, b: Ty) -> Ty {
        Ty::Prod(Box::new(a), Box::new(b))
    }

    /// `𝒩`, `2`, `T`, `A ⇒ B` and `A & B`.
    pub fn game(&self) -> Game {
        match self {
            Ty::Nat => lazy_nat_game(),
            Ty::Bool => boolean_game(),
            Ty::Unit => terminal_game(),
            Ty::Arrow(a, b) => implication(&a.game(), &b.game()),
            Ty::Prod(a, b) => product(&a.game(), &b.game()),
        }
    }

    /// The component reached by a product path (outermost letter last).
    pub fn at_path(&self, path: &[Letter]) -> Option<&Ty> {
        let mut t = self;
        for l in path.iter().rev() {
            t = match (t, l) {
                (Ty::Prod(a, _), Letter::W) => a,
                (Ty::Prod(_, b), Letter::E) => b,
                _ => return None,
            };
        }
        Some(t)
    }

    pub fn is_ground(&self) -> bool {
        matches!(self, Ty::Nat | Ty::Bool | Ty::Unit)
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Nat => write!(f, "nat"),
            Ty::Bool => write!(f, "bool"),
            Ty::Unit => write!(f, "unit"),
            Ty::Arrow(a, b) => match **a {
                Ty::Arrow(..) => write!(f, "({a}) -> {b}"),
                _ => write!(f, "{a} -> {b}"),
            },
            Ty::Prod(a, b) => {
                let wrap = |t: &Ty| matches!(t, Ty::Arrow(..));
                match (wrap(a), wrap(b) || matches!(**b, Ty::Prod(..))) {
                    (true, true) => write!(f, "({a}) * ({b})"),
                    (true, false) => write!(f, "({a}) * {b}"),
                    (false, true) => write!(f, "{a} * ({b})"),
                    (false, false) => write!(f, "{a} * {b}"),
                }
            }
        }
    }
}
