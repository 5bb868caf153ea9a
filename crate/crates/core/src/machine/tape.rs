//! J-pointing tapes: blocks `e_k … e_1 m $` with justifier edges between `$` cells.

use std::collections::BTreeMap;
use std::fmt;

use crate::games::{Game, Move, Occ, Position, Substance};
use crate::strategies::Selector;
use crate::tags::{InnerTag, OuterTag, TagToken};

use super::MachineError;

/// A tape or stack symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Sym {
    /// `⊢`
    Start,
    Dollar,
    /// The inner element `m` of a move.
    Elem(Substance, InnerTag),
    Tag(TagToken),
    Sel(Selector),
}

impl Sym {
    pub fn parse(s: &str) -> Option<Sym> {
        match s {
            "|-" => return Some(Sym::Start),
            "$" => return Some(Sym::Dollar),
            _ => {}
        }
        if let Some(sel) = Selector::from_marker(s) {
            return Some(Sym::Sel(sel));
        }
        if let Some(t) = TagToken::parse(s) {
            return Some(Sym::Tag(t));
        }
        let (name, letters) = s.split_once('_')?;
        Some(Sym::Elem(Substance::from_name(name)?, InnerTag::parse(letters)?))
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sym::Start => write!(f, "|-"),
            Sym::Dollar => write!(f, "$"),
            Sym::Elem(sub, inner) => write!(f, "{}_{}", sub.name(), inner),
            Sym::Tag(t) => write!(f, "{t}"),
            Sym::Sel(s) => write!(f, "{s}"),
        }
    }
}

/// An append-only j-pointing tape.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct JTape {
    pub cells: Vec<Sym>,
    /// `$` cell to the `$` cell of its justifier.
    pub edges: BTreeMap<usize, usize>,
    /// The `$` cell of each occurrence.
    dollars: Vec<usize>,
}

impl JTape {
    pub fn new() -> JTape {
        JTape {
            cells: vec![Sym::Start],
            edges: BTreeMap::new(),
            dollars: Vec::new(),
        }
    }

    /// Tape of `s` without a legality check.
    pub fn from_position(s: &Position) -> JTape {
        let mut t = JTape::new();
        for o in &s.0 {
            t.push(o);
        }
        t
    }

    pub fn push(&mut self, o: &Occ) {
        self.cells.extend(o.mv.outer.0.iter().rev().map(|&t| Sym::Tag(t)));
        self.cells.push(Sym::Elem(o.mv.sub, o.mv.inner.clone()));
        self.cells.push(Sym::Dollar);
        let d = self.cells.len() - 1;
        if let Some(j) = o.just {
            self.edges.insert(d, self.dollars[j]);
        }
        self.dollars.push(d);
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dollars.is_empty()
    }

    /// Number of encoded occurrences.
    pub fn moves(&self) -> usize {
        self.dollars.len()
    }

    /// `$` cell of occurrence `i`.
    pub fn dollar(&self, i: usize) -> usize {
        self.dollars[i]
    }

    /// Occurrence whose block ends at the `$` cell `d`.
    pub fn occurrence_at(&self, d: usize) -> Option<usize> {
        self.dollars.binary_search(&d).ok()
    }

    pub fn rightmost_dollar(&self) -> Option<usize> {
        self.dollars.last().copied()
    }

    pub fn decode(&self) -> Result<Position, MachineError> {
        let bad = |m: String| MachineError::BadTape(m);
        if self.cells.first() != Some(&Sym::Start) {
            return Err(bad("tape does not start with |-".into()));
        }
        let mut occs = Vec::new();
        let mut index_of = BTreeMap::new();
        let mut tags = Vec::new();
        let mut elem: Option<(Substance, InnerTag)> = None;
        for (c, sym) in self.cells.iter().enumerate().skip(1) {
            match sym {
                Sym::Tag(t) if elem.is_none() => tags.push(*t),
                Sym::Elem(sub, inner) if elem.is_none() => elem = Some((*sub, inner.clone())),
                Sym::Dollar => {
                    let (sub, inner) = elem.take().ok_or_else(|| bad(format!("cell {c}: $ without a move")))?;
                    tags.reverse();
                    let mv = Move::new(sub, inner, OuterTag(std::mem::take(&mut tags)));
                    let just = match self.edges.get(&c) {
                        Some(d) => Some(*index_of.get(d).ok_or_else(|| bad(format!("edge {c}>{d} misses a $")))?),
                        None => None,
                    };
                    index_of.insert(c, occs.len());
                    occs.push(Occ::new(mv, just));
                }
                other => return Err(bad(format!("cell {c}: unexpected symbol {other}"))),
            }
        }
        if elem.is_some() || !tags.is_empty() {
            return Err(bad("unterminated block".into()));
        }
        Ok(Position(occs))
    }

    pub fn serialize(&self) -> String {
        let cells: Vec<String> = self.cells.iter().map(|c| c.to_string()).collect();
        let edges: Vec<String> = self.edges.iter().map(|(s, d)| format!("{s}>{d}")).collect();
        let mut out = format!("TAPE\n{}\nEDGES", cells.join(" "));
        for e in edges {
            out.push(' ');
            out.push_str(&e);
        }
        out.push('\n');
        out
    }

    pub fn parse(text: &str) -> Result<JTape, MachineError> {
        let bad = |m: &str| MachineError::BadTape(m.to_string());
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some("TAPE") {
            return Err(bad("missing TAPE header"));
        }
        let cells = lines
            .next()
            .ok_or_else(|| bad("missing cells"))?
            .split_whitespace()
            .map(|s| Sym::parse(s).ok_or_else(|| bad(&format!("unknown symbol {s}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let edge_line = lines.next().ok_or_else(|| bad("missing EDGES"))?;
        let mut words = edge_line.split_whitespace();
        if words.next() != Some("EDGES") {
            return Err(bad("missing EDGES"));
        }
        let mut edges = BTreeMap::new();
        for w in words {
            let (s, d) = w.split_once('>').ok_or_else(|| bad("bad edge"))?;
            let s: usize = s.parse().map_err(|_| bad("bad edge"))?;
            let d: usize = d.parse().map_err(|_| bad("bad edge"))?;
            edges.insert(s, d);
        }
        let dollars = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| **c == Sym::Dollar)
            .map(|(i, _)| i)
            .collect();
        let tape = JTape { cells, edges, dollars };
        tape.decode()?;
        Ok(tape)
    }
}

/// The tape of a legal position of `g`.
pub fn encode_position(g: &Game, s: &Position) -> Result<JTape, MachineError> {
    g.accepts(s).map_err(|e| MachineError::Illegal(e.to_string()))?;
    Ok(JTape::from_position(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::implication;
    use crate::games::lazy_nat_game;

    fn mv(sub: Substance, inner: &str, outer: &str) -> Move {
        Move::new(sub, InnerTag::parse(inner).unwrap(), OuterTag::parse(outer).unwrap())
    }

    #[test]
    fn blocks_are_reversed_tags() {
        let g = implication(&lazy_nat_game(), &lazy_nat_game());
        let s = Position(vec![
            Occ::new(mv(Substance::QHat, "E", ""), None),
            Occ::new(mv(Substance::QHat, "W", "[0 ]0 h"), Some(0)),
        ]);
        let t = encode_position(&g, &s).unwrap();
        assert_eq!(t.serialize(), "TAPE\n|- qhat_E $ h ]0 [0 qhat_W $\nEDGES 7>2\n");
        assert_eq!(t.decode().unwrap(), s);
        assert_eq!(JTape::parse(&t.serialize()).unwrap(), t);
        let bad = Position(vec![Occ::new(mv(Substance::QHat, "W", ""), None)]);
        assert!(encode_position(&g, &bad).is_err());
    }
}
