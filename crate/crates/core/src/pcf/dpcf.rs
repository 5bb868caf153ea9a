//! DPCF description trees: atoms closed under currying, pairing and
//! promotion-then-concatenation.

use std::fmt;

use thiserror::Error;

use crate::constructions::{concatenate_strategies, curry_strategy, exponential, pair_strategies, promote_strategy};
use crate::strategies::Strategy;

use super::atoms::{atom_strategy, Atom};
use super::Ty;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Desc {
    Atomic(Atom),
    Curry(Box<Desc>),
    Pair(Box<Desc>, Box<Desc>),
    /// `a† ‡ b`.
    PromoteConcat(Box<Desc>, Box<Desc>),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DpcfError {
    #[error("atom {0} has an ill-formed signature")]
    Atom(String),
    #[error("curry node {node}: domain {dom} is not a product")]
    Curry { node: String, dom: Ty },
    #[error("pair node {node}: domains {left} and {right} differ")]
    Pair { node: String, left: Ty, right: Ty },
    #[error("promote-concat node {node}: codomain {cod} does not match domain {dom}")]
    Concat { node: String, cod: Ty, dom: Ty },
}

impl Desc {
    pub fn atom(a: Atom) -> Desc {
        Desc::Atomic(a)
    }

    pub fn curry(d: Desc) -> Desc {
        Desc::Curry(Box::new(d))
    }

    pub fn pair(a: Desc, b: Desc) -> Desc {
        Desc::Pair(Box::new(a), Box::new(b))
    }

    pub fn then(a: Desc, b: Desc) -> Desc {
        Desc::PromoteConcat(Box::new(a), Box::new(b))
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Desc::Atomic(_) => 1,
            Desc::Curry(d) => 1 + d.size(),
            Desc::Pair(a, b) | Desc::PromoteConcat(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// True when every atom is a DPCF generator.
    pub fn is_dpcf(&self) -> bool {
        match self {
            Desc::Atomic(a) => a.is_dpcf(),
            Desc::Curry(d) => d.is_dpcf(),
            Desc::Pair(a, b) | Desc::PromoteConcat(a, b) => a.is_dpcf() && b.is_dpcf(),
        }
    }

    fn label(&self) -> String {
        match self {
            Desc::Atomic(a) => a.to_string(),
            Desc::Curry(_) => "curry".into(),
            Desc::Pair(..) => "pair".into(),
            Desc::PromoteConcat(..) => "promote-concat".into(),
        }
    }

    fn write_tree(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        writeln!(f, "{}{}", "  ".repeat(depth), self.label())?;
        match self {
            Desc::Atomic(_) => Ok(()),
            Desc::Curry(d) => d.write_tree(f, depth + 1),
            Desc::Pair(a, b) | Desc::PromoteConcat(a, b) => {
                a.write_tree(f, depth + 1)?;
                b.write_tree(f, depth + 1)
            }
        }
    }
}

/// Indented tree, one node per line.
impl fmt::Display for Desc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_tree(f, 0)
    }
}

/// Domain and codomain of the strategy a description denotes.
pub fn signature(d: &Desc) -> Result<(Ty, Ty), DpcfError> {
    match d {
        Desc::Atomic(a) => a.signature().ok_or_else(|| DpcfError::Atom(a.to_string())),
        Desc::Curry(inner) => {
            let (dom, cod) = signature(inner)?;
            match dom {
                Ty::Prod(g, a) => Ok((*g, Ty::arrow(*a, cod))),
                dom => Err(DpcfError::Curry {
                    node: inner.label(),
                    dom,
                }),
            }
        }
        Desc::Pair(a, b) => {
            let (l, x) = signature(a)?;
            let (r, y) = signature(b)?;
            if l != r {
                return Err(DpcfError::Pair {
                    node: format!("<{}, {}>", a.label(), b.label()),
                    left: l,
                    right: r,
                });
            }
            Ok((l, Ty::prod(x, y)))
        }
        Desc::PromoteConcat(a, b) => {
            let (dom, mid) = signature(a)?;
            let (mid2, cod) = signature(b)?;
            if mid != mid2 {
                let node = format!("{} ; {}", a.label(), b.label());
                return Err(DpcfError::Concat {
                    node,
                    cod: mid,
                    dom: mid2,
                });
            }
            Ok((dom, cod))
        }
    }
}

/// The strategy denoted by `d`.
pub fn materialize(d: &Desc) -> Result<Strategy, DpcfError> {
    signature(d)?;
    Ok(build(d))
}

fn build(d: &Desc) -> Strategy {
    match d {
        Desc::Atomic(a) => atom_strategy(a),
        Desc::Curry(inner) => curry_strategy(&build(inner)),
        Desc::Pair(a, b) => pair_strategies(&build(a), &build(b)),
        Desc::PromoteConcat(a, b) => {
            let (_, mid) = signature(a).expect("checked by materialize");
            concatenate_strategies(&promote_strategy(&build(a)), &build(b), &exponential(&mid.game()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signatures_compose() {
        let d = Desc::then(Desc::atom(Atom::Zero(Ty::Unit)), Desc::atom(Atom::Succ));
        assert_eq!(signature(&d), Ok((Ty::Unit, Ty::Nat)));
        let bad = Desc::then(Desc::atom(Atom::IfZero), Desc::atom(Atom::Succ));
        assert!(matches!(signature(&bad), Err(DpcfError::Concat { .. })));
        let c = Desc::curry(Desc::atom(Atom::Proj {
            dom: Ty::prod(Ty::Unit, Ty::Nat),
            path: vec![crate::tags::Letter::E],
        }));
        assert_eq!(signature(&c), Ok((Ty::Unit, Ty::arrow(Ty::Nat, Ty::Nat))));
        assert!(matches!(
            signature(&Desc::curry(Desc::atom(Atom::Succ))),
            Err(DpcfError::Curry { .. })
        ));
    }

    #[test]
    fn tree_display() {
        let d = Desc::then(Desc::atom(Atom::Zero(Ty::Unit)), Desc::atom(Atom::Succ));
        assert_eq!(d.to_string(), "promote-concat\n  zero[unit]\n  succ\n");
    }
}
