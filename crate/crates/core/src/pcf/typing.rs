//! Type inference for PCF terms. Binders of `fun` are annotated; the type of a
//! `fix` binder is inferred by unification and defaults to `nat` when unconstrained.

use thiserror::Error;

use super::syntax::{line_col, Term, TermKind};
use super::Ty;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Typed {
    pub kind: TypedKind,
    pub ty: Ty,
    pub at: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypedKind {
    /// Index counted from the innermost binder.
    Var(usize, String),
    Lam(String, Ty, Box<Typed>),
    App(Box<Typed>, Box<Typed>),
    Pair(Box<Typed>, Box<Typed>),
    Fst(Box<Typed>),
    Snd(Box<Typed>),
    Zero,
    Succ(Box<Typed>),
    Pred(Box<Typed>),
    IfZ(Box<Typed>),
    Case(Box<Typed>, Box<Typed>, Box<Typed>),
    Fix(String, Box<Typed>),
    Tt,
    Ff,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{col}: {msg}")]
pub struct TypeError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum ITy {
    Var(usize),
    Nat,
    Bool,
    Unit,
    Arrow(Box<ITy>, Box<ITy>),
    Prod(Box<ITy>, Box<ITy>),
}

fn lift(t: &Ty) -> ITy {
    match t {
        Ty::Nat => ITy::Nat,
        Ty::Bool => ITy::Bool,
        Ty::Unit => ITy::Unit,
        Ty::Arrow(a, b) => ITy::Arrow(Box::new(lift(a)), Box::new(lift(b))),
        Ty::Prod(a, b) => ITy::Prod(Box::new(lift(a)), Box::new(lift(b))),
    }
}

struct Infer<'a> {
    src: &'a str,
    subst: Vec<Option<ITy>>,
}

struct Node {
    kind: NodeKind,
    ty: ITy,
    at: usize,
}

enum NodeKind {
    Var(usize, String),
    Lam(String, ITy, Box<Node>),
    App(Box<Node>, Box<Node>),
    Pair(Box<Node>, Box<Node>),
    Fst(Box<Node>),
    Snd(Box<Node>),
    Zero,
    Succ(Box<Node>),
    Pred(Box<Node>),
    IfZ(Box<Node>),
    Case(Box<Node>, Box<Node>, Box<Node>),
    Fix(String, Box<Node>),
    Tt,
    Ff,
}

impl Infer<'_> {
    fn fresh(&mut self) -> ITy {
        self.subst.push(None);
        ITy::Var(self.subst.len() - 1)
    }

    fn resolve(&self, t: &ITy) -> ITy {
        match t {
            ITy::Var(v) => match &self.subst[*v] {
                Some(u) => self.resolve(u),
                None => t.clone(),
            },
            ITy::Arrow(a, b) => ITy::Arrow(Box::new(self.resolve(a)), Box::new(self.resolve(b))),
            ITy::Prod(a, b) => ITy::Prod(Box::new(self.resolve(a)), Box::new(self.resolve(b))),
            _ => t.clone(),
        }
    }

    fn occurs(&self, v: usize, t: &ITy) -> bool {
        match self.resolve(t) {
            ITy::Var(w) => v == w,
            ITy::Arrow(a, b) | ITy::Prod(a, b) => self.occurs(v, &a) || self.occurs(v, &b),
            _ => false,
        }
    }

    fn unify(&mut self, a: &ITy, b: &ITy) -> bool {
        let (a, b) = (self.resolve(a), self.resolve(b));
        match (&a, &b) {
            (ITy::Var(v), ITy::Var(w)) if v == w => true,
            (ITy::Var(v), t) | (t, ITy::Var(v)) => {
                if self.occurs(*v, t) {
                    return false;
                }
                self.subst[*v] = Some(t.clone());
                true
            }
            (ITy::Arrow(a1, b1), ITy::Arrow(a2, b2)) | (ITy::Prod(a1, b1), ITy::Prod(a2, b2)) => {
                self.unify(a1, a2) && self.unify(b1, b2)
            }
            _ => a == b,
        }
    }

    fn show(&self, t: &ITy) -> String {
        finish(&self.resolve(t)).to_string()
    }

    fn err<T>(&self, at: usize, msg: String) -> Result<T, TypeError> {
        let (line, col) = line_col(self.src, at);
        Err(TypeError { line, col, msg })
    }

    fn expect(&mut self, n: &Node, want: &ITy) -> Result<(), TypeError> {
        if self.unify(&n.ty, want) {
            Ok(())
        } else {
            self.err(
                n.at,
                format!("expected {}, found {}", self.show(want), self.show(&n.ty)),
            )
        }
    }

    fn go(&mut self, t: &Term, ctx: &mut Vec<(String, ITy)>) -> Result<Node, TypeError> {
        let at = t.at;
        let node = |kind, ty| Ok(Node { kind, ty, at });
        match &t.kind {
            TermKind::Var(x) => {
                let Some(i) = ctx.iter().rev().position(|(y, _)| y == x) else {
                    return self.err(at, format!("unbound variable `{x}`"));
                };
                let ty = ctx[ctx.len() - 1 - i].1.clone();
                node(NodeKind::Var(i, x.clone()), ty)
            }
            TermKind::Lam(x, a, body) => {
                let a = lift(a);
                ctx.push((x.clone(), a.clone()));
                let b = self.go(body, ctx);
                ctx.pop();
                let b = b?;
                let ty = ITy::Arrow(Box::new(a.clone()), Box::new(b.ty.clone()));
                node(NodeKind::Lam(x.clone(), a, Box::new(b)), ty)
            }
            TermKind::App(f, a) => {
                let f = self.go(f, ctx)?;
                let a = self.go(a, ctx)?;
                let r = self.fresh();
                let want = ITy::Arrow(Box::new(a.ty.clone()), Box::new(r.clone()));
                if !self.unify(&f.ty, &want) {
                    return self.err(
                        f.at,
                        format!(
                            "cannot apply {} to an argument of type {}",
                            self.show(&f.ty),
                            self.show(&a.ty)
                        ),
                    );
                }
                node(NodeKind::App(Box::new(f), Box::new(a)), r)
            }
            TermKind::Pair(a, b) => {
                let a = self.go(a, ctx)?;
                let b = self.go(b, ctx)?;
                let ty = ITy::Prod(Box::new(a.ty.clone()), Box::new(b.ty.clone()));
                node(NodeKind::Pair(Box::new(a), Box::new(b)), ty)
            }
            TermKind::Fst(p) | TermKind::Snd(p) => {
                let p = self.go(p, ctx)?;
                let (x, y) = (self.fresh(), self.fresh());
                self.expect(&p, &ITy::Prod(Box::new(x.clone()), Box::new(y.clone())))?;
                if matches!(t.kind, TermKind::Fst(_)) {
                    node(NodeKind::Fst(Box::new(p)), x)
                } else {
                    node(NodeKind::Snd(Box::new(p)), y)
                }
            }
            TermKind::Zero => node(NodeKind::Zero, ITy::Nat),
            TermKind::Tt => node(NodeKind::Tt, ITy::Bool),
            TermKind::Ff => node(NodeKind::Ff, ITy::Bool),
            TermKind::Succ(a) | TermKind::Pred(a) | TermKind::IfZ(a) => {
                let a = self.go(a, ctx)?;
                self.expect(&a, &ITy::Nat)?;
                let a = Box::new(a);
                match t.kind {
                    TermKind::Succ(_) => node(NodeKind::Succ(a), ITy::Nat),
                    TermKind::Pred(_) => node(NodeKind::Pred(a), ITy::Nat),
                    _ => node(NodeKind::IfZ(a), ITy::Bool),
                }
            }
            TermKind::Case(a, b, c) => {
                let a = self.go(a, ctx)?;
                let b = self.go(b, ctx)?;
                let c = self.go(c, ctx)?;
                self.expect(&b, &a.ty.clone())?;
                self.expect(&c, &ITy::Bool)?;
                let ty = a.ty.clone();
                node(NodeKind::Case(Box::new(a), Box::new(b), Box::new(c)), ty)
            }
            TermKind::Fix(x, ann, body) => {
                let a = match ann {
                    Some(a) => lift(a),
                    None => self.fresh(),
                };
                ctx.push((x.clone(), a.clone()));
                let b = self.go(body, ctx);
                ctx.pop();
                let b = b?;
                self.expect(&b, &a)?;
                node(NodeKind::Fix(x.clone(), Box::new(b)), a)
            }
        }
    }

    fn build(&self, n: Node) -> Typed {
        let ty = finish(&self.resolve(&n.ty));
        let b = |x: Box<Node>| Box::new(self.build(*x));
        let kind = match n.kind {
            NodeKind::Var(i, x) => TypedKind::Var(i, x),
            NodeKind::Lam(x, a, body) => TypedKind::Lam(x, finish(&self.resolve(&a)), b(body)),
            NodeKind::App(f, a) => TypedKind::App(b(f), b(a)),
            NodeKind::Pair(x, y) => TypedKind::Pair(b(x), b(y)),
            NodeKind::Fst(x) => TypedKind::Fst(b(x)),
            NodeKind::Snd(x) => TypedKind::Snd(b(x)),
            NodeKind::Zero => TypedKind::Zero,
            NodeKind::Succ(x) => TypedKind::Succ(b(x)),
            NodeKind::Pred(x) => TypedKind::Pred(b(x)),
            NodeKind::IfZ(x) => TypedKind::IfZ(b(x)),
            NodeKind::Case(x, y, z) => TypedKind::Case(b(x), b(y), b(z)),
            NodeKind::Fix(x, body) => TypedKind::Fix(x, b(body)),
            NodeKind::Tt => TypedKind::Tt,
            NodeKind::Ff => TypedKind::Ff,
        };
        Typed { kind, ty, at: n.at }
    }
}

/// Unresolved type variables become `nat`.
fn finish(t: &ITy) -> Ty {
    match t {
        ITy::Var(_) | ITy::Nat => Ty::Nat,
        ITy::Bool => Ty::Bool,
        ITy::Unit => Ty::Unit,
        ITy::Arrow(a, b) => Ty::arrow(finish(a), finish(b)),
        ITy::Prod(a, b) => Ty::prod(finish(a), finish(b)),
    }
}

/// Types a term under the context `ctx` (outermost binding first).
pub fn typecheck(src: &str, t: &Term, ctx: &[(String, Ty)]) -> Result<Typed, TypeError> {
    let mut inf = Infer { src, subst: Vec::new() };
    let mut ictx: Vec<(String, ITy)> = ctx.iter().map(|(x, t)| (x.clone(), lift(t))).collect();
    let n = inf.go(t, &mut ictx)?;
    Ok(inf.build(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcf::syntax::parse_term;

    fn ty_of(src: &str) -> Result<Ty, TypeError> {
        typecheck(src, &parse_term(src).unwrap(), &[]).map(|t| t.ty)
    }

    #[test]
    fn infers_fix_binder() {
        let add = "fix f. fun m: nat. fun n: nat. case n (succ (f (pred m) n)) (ifz m)";
        assert_eq!(ty_of(add).unwrap().to_string(), "nat -> nat -> nat");
        assert_eq!(ty_of("fix f. f").unwrap(), Ty::Nat);
        assert_eq!(ty_of("fix f: bool. f").unwrap(), Ty::Bool);
    }

    #[test]
    fn rejects_ill_typed() {
        let e = ty_of("succ tt").unwrap_err();
        assert_eq!((e.line, e.col), (1, 6));
        assert!(ty_of("zero zero").is_err());
        assert!(ty_of("x").is_err());
        assert!(ty_of("case zero tt tt").is_err());
    }

    #[test]
    fn products() {
        assert_eq!(ty_of("fst (zero, tt)").unwrap(), Ty::Nat);
        assert_eq!(
            ty_of("fun p: nat * bool. snd p").unwrap().to_string(),
            "nat * bool -> bool"
        );
    }
}
