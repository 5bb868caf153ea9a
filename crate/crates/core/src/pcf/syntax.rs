//! Concrete syntax of PCF terms and types.

use std::fmt;

use thiserror::Error;

use super::Ty;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub kind: TermKind,
    /// Byte offset of the term in its source.
    pub at: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermKind {
    Var(String),
    Lam(String, Ty, Box<Term>),
    App(Box<Term>, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    Fst(Box<Term>),
    Snd(Box<Term>),
    Zero,
    Succ(Box<Term>),
    Pred(Box<Term>),
    IfZ(Box<Term>),
    /// `case e1 e2 b`: `e1` when `b` is tt, `e2` otherwise.
    Case(Box<Term>, Box<Term>, Box<Term>),
    Fix(String, Option<Ty>, Box<Term>),
    Tt,
    Ff,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{col}: {msg}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

/// 1-based line and column of a byte offset.
pub fn line_col(src: &str, at: usize) -> (usize, usize) {
    let before = &src[..at.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Kw(&'static str),
    Sym(&'static str),
    Eof,
}

const KEYWORDS: [&str; 14] = [
    "fun", "fix", "zero", "succ", "pred", "ifz", "tt", "ff", "case", "fst", "snd", "nat", "bool", "unit",
];

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c == '#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'') {
                i += 1;
            }
            let w = &src[start..i];
            let tok = match KEYWORDS.iter().find(|k| **k == w) {
                Some(k) => Tok::Kw(k),
                None => Tok::Ident(w.to_string()),
            };
            out.push((tok, start));
        } else if src[i..].starts_with("->") {
            out.push((Tok::Sym("->"), i));
            i += 2;
        } else {
            let sym = match c {
                '(' => "(",
                ')' => ")",
                ',' => ",",
                ':' => ":",
                '.' => ".",
                '*' => "*",
                _ => {
                    let (line, col) = line_col(src, i);
                    return Err(SyntaxError {
                        line,
                        col,
                        msg: format!("unexpected character {c:?}"),
                    });
                }
            };
            out.push((Tok::Sym(sym), i));
            i += c.len_utf8();
        }
    }
    out.push((Tok::Eof, src.len()));
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn at(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, SyntaxError> {
        let (line, col) = line_col(self.src, self.at());
        Err(SyntaxError {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, sym: &'static str) -> Result<(), SyntaxError> {
        if *self.peek() == Tok::Sym(sym) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected `{sym}`"))
        }
    }

    fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(x) => {
                self.bump();
                Ok(x)
            }
            _ => self.err("expected an identifier"),
        }
    }

    fn ty(&mut self) -> Result<Ty, SyntaxError> {
        let a = self.ty_prod()?;
        if *self.peek() == Tok::Sym("->") {
            self.bump();
            let b = self.ty()?;
            return Ok(Ty::arrow(a, b));
        }
        Ok(a)
    }

    fn ty_prod(&mut self) -> Result<Ty, SyntaxError> {
        let mut a = self.ty_atom()?;
        while *self.peek() == Tok::Sym("*") {
            self.bump();
            let b = self.ty_atom()?;
            a = Ty::prod(a, b);
        }
        Ok(a)
    }

    fn ty_atom(&mut self) -> Result<Ty, SyntaxError> {
        match self.bump() {
            Tok::Kw("nat") => Ok(Ty::Nat),
            Tok::Kw("bool") => Ok(Ty::Bool),
            Tok::Kw("unit") => Ok(Ty::Unit),
            Tok::Sym("(") => {
                let t = self.ty()?;
                self.expect(")")?;
                Ok(t)
            }
            _ => {
                self.pos -= 1;
                self.err("expected a type")
            }
        }
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        let at = self.at();
        match self.peek() {
            Tok::Kw("fun") => {
                self.bump();
                let x = self.ident()?;
                self.expect(":")?;
                let t = self.ty()?;
                self.expect(".")?;
                let body = self.term()?;
                Ok(Term {
                    kind: TermKind::Lam(x, t, Box::new(body)),
                    at,
                })
            }
            Tok::Kw("fix") => {
                self.bump();
                let x = self.ident()?;
                let t = if *self.peek() == Tok::Sym(":") {
                    self.bump();
                    Some(self.ty()?)
                } else {
                    None
                };
                self.expect(".")?;
                let body = self.term()?;
                Ok(Term {
                    kind: TermKind::Fix(x, t, Box::new(body)),
                    at,
                })
            }
            _ => self.app(),
        }
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(_) | Tok::Sym("(") => true,
            Tok::Kw(k) => matches!(
                *k,
                "zero" | "succ" | "pred" | "ifz" | "tt" | "ff" | "case" | "fst" | "snd"
            ),
            _ => false,
        }
    }

    fn app(&mut self) -> Result<Term, SyntaxError> {
        let mut f = self.atom()?;
        while self.starts_atom() {
            let a = self.atom()?;
            let at = f.at;
            f = Term {
                kind: TermKind::App(Box::new(f), Box::new(a)),
                at,
            };
        }
        if matches!(self.peek(), Tok::Kw("fun") | Tok::Kw("fix")) {
            let a = self.term()?;
            let at = f.at;
            f = Term {
                kind: TermKind::App(Box::new(f), Box::new(a)),
                at,
            };
        }
        Ok(f)
    }

    fn atom(&mut self) -> Result<Term, SyntaxError> {
        let at = self.at();
        let unary = |p: &mut Self, k: fn(Box<Term>) -> TermKind| -> Result<Term, SyntaxError> {
            let a = p.atom()?;
            Ok(Term {
                kind: k(Box::new(a)),
                at,
            })
        };
        match self.bump() {
            Tok::Ident(x) => Ok(Term {
                kind: TermKind::Var(x),
                at,
            }),
            Tok::Kw("zero") => Ok(Term {
                kind: TermKind::Zero,
                at,
            }),
            Tok::Kw("tt") => Ok(Term { kind: TermKind::Tt, at }),
            Tok::Kw("ff") => Ok(Term { kind: TermKind::Ff, at }),
            Tok::Kw("succ") => unary(self, TermKind::Succ),
            Tok::Kw("pred") => unary(self, TermKind::Pred),
            Tok::Kw("ifz") => unary(self, TermKind::IfZ),
            Tok::Kw("fst") => unary(self, TermKind::Fst),
            Tok::Kw("snd") => unary(self, TermKind::Snd),
            Tok::Kw("case") => {
                let a = self.atom()?;
                let b = self.atom()?;
                let c = self.atom()?;
                Ok(Term {
                    kind: TermKind::Case(Box::new(a), Box::new(b), Box::new(c)),
                    at,
                })
            }
            Tok::Sym("(") => {
                let a = self.term()?;
                if *self.peek() == Tok::Sym(",") {
                    self.bump();
                    let b = self.term()?;
                    self.expect(")")?;
                    return Ok(Term {
                        kind: TermKind::Pair(Box::new(a), Box::new(b)),
                        at,
                    });
                }
                self.expect(")")?;
                Ok(a)
            }
            Tok::Eof => {
                self.pos = self.toks.len() - 1;
                self.err("unexpected end of input")
            }
            _ => {
                self.pos -= 1;
                self.err("expected a term")
            }
        }
    }
}

pub fn parse_term(src: &str) -> Result<Term, SyntaxError> {
    let mut p = Parser {
        src,
        toks: lex(src)?,
        pos: 0,
    };
    if *p.peek() == Tok::Eof {
        return p.err("empty program");
    }
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return p.err("trailing input");
    }
    Ok(t)
}

pub fn parse_type(src: &str) -> Result<Ty, SyntaxError> {
    let mut p = Parser {
        src,
        toks: lex(src)?,
        pos: 0,
    };
    let t = p.ty()?;
    if *p.peek() != Tok::Eof {
        return p.err("trailing input");
    }
    Ok(t)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            TermKind::Var(x) => write!(f, "{x}"),
            TermKind::Lam(x, t, b) => write!(f, "(fun {x}: {t}. {b})"),
            TermKind::App(a, b) => write!(f, "({a} {b})"),
            TermKind::Pair(a, b) => write!(f, "({a}, {b})"),
            TermKind::Fst(a) => write!(f, "(fst {a})"),
            TermKind::Snd(a) => write!(f, "(snd {a})"),
            TermKind::Zero => write!(f, "zero"),
            TermKind::Succ(a) => write!(f, "(succ {a})"),
            TermKind::Pred(a) => write!(f, "(pred {a})"),
            TermKind::IfZ(a) => write!(f, "(ifz {a})"),
            TermKind::Case(a, b, c) => write!(f, "(case {a} {b} {c})"),
            TermKind::Fix(x, Some(t), b) => write!(f, "(fix {x}: {t}. {b})"),
            TermKind::Fix(x, None, b) => write!(f, "(fix {x}. {b})"),
            TermKind::Tt => write!(f, "tt"),
            TermKind::Ff => write!(f, "ff"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn types_associate() {
        assert_eq!(
            parse_type("nat -> nat -> bool").unwrap(),
            Ty::arrow(Ty::Nat, Ty::arrow(Ty::Nat, Ty::Bool))
        );
        assert_eq!(
            parse_type("(nat -> nat) -> nat").unwrap().to_string(),
            "(nat -> nat) -> nat"
        );
        assert_eq!(
            parse_type("nat * bool -> unit").unwrap(),
            Ty::arrow(Ty::prod(Ty::Nat, Ty::Bool), Ty::Unit)
        );
    }

    #[test]
    fn application_is_left_associative() {
        let t = parse_term("f x y").unwrap();
        assert_eq!(t.to_string(), "((f x) y)");
        let t = parse_term("succ (f (pred m) n)").unwrap();
        assert_eq!(t.to_string(), "(succ ((f (pred m)) n))");
    }

    #[test]
    fn round_trip_through_display() {
        let src = "fix f. fun m: nat. fun n: nat. case n (succ (f (pred m) n)) (ifz m)";
        let t = parse_term(src).unwrap();
        let again = parse_term(&t.to_string()).unwrap();
        assert_eq!(t.to_string(), again.to_string());
    }

    #[test]
    fn errors_carry_locations() {
        let e = parse_term("succ\n  (zero").unwrap_err();
        assert_eq!((e.line, e.col), (2, 8));
        assert!(parse_term("").is_err());
        assert!(parse_term("zero )").is_err());
    }
}
