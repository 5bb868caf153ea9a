//! Call-by-name denotation of typed PCF terms as DPCF descriptions.

use thiserror::Error;

use super::atoms::Atom;
use super::dpcf::Desc;
use super::syntax::{parse_term, SyntaxError};
use super::typing::{typecheck, TypeError, Typed, TypedKind};
use super::Ty;
use crate::tags::Letter;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FrontError {
    #[error("syntax error at {0}")]
    Syntax(#[from] SyntaxError),
    #[error("type error at {0}")]
    Type(#[from] TypeError),
}

/// The context `x₁:A₁, …, x_k:A_k` as the left-nested product `((T & A₁) & …) & A_k`.
pub fn context_type(ctx: &[Ty]) -> Ty {
    ctx.iter().fold(Ty::Unit, |acc, a| Ty::prod(acc, a.clone()))
}

/// Denotation of a closed term, a strategy on `T ⇒ A`.
pub fn denote(t: &Typed) -> Desc {
    denote_in(t, &mut Vec::new())
}

/// Parses, type-checks and denotes a closed program; returns its type too.
pub fn denote_source(src: &str) -> Result<(Desc, Ty), FrontError> {
    let term = parse_term(src)?;
    let typed = typecheck(src, &term, &[])?;
    Ok((denote(&typed), typed.ty))
}

fn then(a: Desc, atom: Atom) -> Desc {
    Desc::then(a, Desc::atom(atom))
}

/// Denotation under the context `ctx` (outermost binding first).
pub fn denote_in(t: &Typed, ctx: &mut Vec<Ty>) -> Desc {
    let g = context_type(ctx);
    match &t.kind {
        TypedKind::Var(i, _) => {
            let mut path = vec![Letter::E];
            path.extend(std::iter::repeat_n(Letter::W, *i));
            Desc::atom(Atom::Proj { dom: g, path })
        }
        TypedKind::Lam(_, a, body) => {
            ctx.push(a.clone());
            let d = denote_in(body, ctx);
            ctx.pop();
            Desc::curry(d)
        }
        TypedKind::App(f, a) => {
            let Ty::Arrow(x, y) = &f.ty else {
                unreachable!("typed application")
            };
            let p = Desc::pair(denote_in(f, ctx), denote_in(a, ctx));
            then(p, Atom::Ev((**x).clone(), (**y).clone()))
        }
        TypedKind::Pair(a, b) => Desc::pair(denote_in(a, ctx), denote_in(b, ctx)),
        TypedKind::Fst(p) | TypedKind::Snd(p) => {
            let l = if matches!(t.kind, TypedKind::Fst(_)) {
                Letter::W
            } else {
                Letter::E
            };
            then(
                denote_in(p, ctx),
                Atom::Proj {
                    dom: p.ty.clone(),
                    path: vec![l],
                },
            )
        }
        TypedKind::Zero => Desc::atom(Atom::Zero(g)),
        TypedKind::Succ(m) => then(denote_in(m, ctx), Atom::Succ),
        TypedKind::Pred(m) => then(denote_in(m, ctx), Atom::Pred),
        TypedKind::IfZ(m) => then(denote_in(m, ctx), Atom::IfZero),
        TypedKind::Tt => then(Desc::atom(Atom::Zero(g)), Atom::IfZero),
        TypedKind::Ff => then(then(Desc::atom(Atom::Zero(g)), Atom::Succ), Atom::IfZero),
        TypedKind::Case(a, b, c) => {
            let branches = Desc::pair(denote_in(a, ctx), denote_in(b, ctx));
            then(Desc::pair(branches, denote_in(c, ctx)), Atom::Case(t.ty.clone()))
        }
        TypedKind::Fix(_, body) => {
            ctx.push(t.ty.clone());
            let d = denote_in(body, ctx);
            ctx.pop();
            then(Desc::curry(d), Atom::Fix(t.ty.clone()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcf::dpcf::signature;

    #[test]
    fn succ_zero_shape() {
        let (d, ty) = denote_source("succ zero").unwrap();
        assert_eq!(ty, Ty::Nat);
        assert_eq!(d, then(Desc::atom(Atom::Zero(Ty::Unit)), Atom::Succ));
    }

    #[test]
    fn identity_is_curried_projection() {
        let (d, _) = denote_source("fun x: nat. x").unwrap();
        let proj = Atom::Proj {
            dom: Ty::prod(Ty::Unit, Ty::Nat),
            path: vec![Letter::E],
        };
        assert_eq!(d, Desc::curry(Desc::atom(proj)));
    }

    #[test]
    fn denotations_are_well_formed() {
        let progs = [
            "fun x: nat. fun y: bool. case x zero y",
            "(fix f. fun m: nat. fun n: nat. case n (succ (f (pred m) n)) (ifz m)) (succ zero) zero",
            "fst (tt, zero)",
            "snd (tt, fun x: nat. x) zero",
            "ff",
        ];
        for p in progs {
            let (d, ty) = denote_source(p).unwrap();
            assert_eq!(signature(&d).unwrap(), (Ty::Unit, ty), "{p}");
        }
    }

    #[test]
    fn errors_surface() {
        assert!(matches!(denote_source("succ ("), Err(FrontError::Syntax(_))));
        assert!(matches!(denote_source("succ tt"), Err(FrontError::Type(_))));
    }
}
