//! Inner tags, depth-annotated outer tags and the numeric codecs on them.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    W,
    E,
    N,
    S,
}

impl Letter {
    pub fn as_char(self) -> char {
        match self {
            Letter::W => 'W',
            Letter::E => 'E',
            Letter::N => 'N',
            Letter::S => 'S',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'W' => Some(Letter::W),
            'E' => Some(Letter::E),
            'N' => Some(Letter::N),
            'S' => Some(Letter::S),
            _ => None,
        }
    }
}

/// Finite word over `{W, E, N, S}`. Constructions append their letter, so the
/// outermost construction's letter is the last one.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InnerTag(pub Vec<Letter>);

impl InnerTag {
    pub fn empty() -> InnerTag {
        InnerTag(Vec::new())
    }

    pub fn parse(s: &str) -> Option<InnerTag> {
        s.chars()
            .map(Letter::from_char)
            .collect::<Option<Vec<_>>>()
            .map(InnerTag)
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    /// The letter `k` places from the end (0 is the last letter).
    pub fn from_end(&self, k: usize) -> Option<Letter> {
        self.0.len().checked_sub(k + 1).map(|i| self.0[i])
    }

    pub fn ends_with(&self, suffix: &[Letter]) -> bool {
        self.0.ends_with(suffix)
    }

    pub fn push(&self, l: Letter) -> InnerTag {
        let mut v = self.0.clone();
        v.push(l);
        InnerTag(v)
    }

    pub fn extend(&self, ls: &[Letter]) -> InnerTag {
        let mut v = self.0.clone();
        v.extend_from_slice(ls);
        InnerTag(v)
    }

    /// Removes the last letter if it is `l`.
    pub fn strip(&self, l: Letter) -> Option<InnerTag> {
        match self.0.split_last() {
            Some((&x, rest)) if x == l => Some(InnerTag(rest.to_vec())),
            _ => None,
        }
    }

    pub fn strip_suffix(&self, suffix: &[Letter]) -> Option<InnerTag> {
        if self.0.ends_with(suffix) {
            Some(InnerTag(self.0[..self.0.len() - suffix.len()].to_vec()))
        } else {
            None
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for InnerTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TagToken {
    /// ℓ
    L,
    /// ℏ
    H,
    Open(u32),
    Close(u32),
}

impl TagToken {
    fn shifted(self, by: i64) -> TagToken {
        match self {
            TagToken::Open(d) => TagToken::Open((d as i64 + by) as u32),
            TagToken::Close(d) => TagToken::Close((d as i64 + by) as u32),
            t => t,
        }
    }

    pub fn parse(s: &str) -> Option<TagToken> {
        match s {
            "l" => Some(TagToken::L),
            "h" => Some(TagToken::H),
            _ => {
                let (head, rest) = s.split_at(1.min(s.len()));
                let d: u32 = rest.parse().ok()?;
                match head {
                    "[" => Some(TagToken::Open(d)),
                    "]" => Some(TagToken::Close(d)),
                    _ => None,
                }
            }
        }
    }
}

impl fmt::Display for TagToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TagToken::L => write!(f, "l"),
            TagToken::H => write!(f, "h"),
            TagToken::Open(d) => write!(f, "[{d}"),
            TagToken::Close(d) => write!(f, "]{d}"),
        }
    }
}

/// Extended outer tag: brackets carry their depth as a field.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OuterTag(pub Vec<TagToken>);

pub type NatSeq = Vec<BigUint>;

/// Builds a `NatSeq` from machine integers.
pub fn nats(xs: &[u64]) -> NatSeq {
    xs.iter().map(|&x| BigUint::from(x)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TagError {
    #[error("malformed tag at token {index}: {reason}")]
    Malformed { index: usize, reason: &'static str },
    #[error("unknown tag token `{0}`")]
    BadToken(String),
}

fn malformed(index: usize, reason: &'static str) -> TagError {
    TagError::Malformed { index, reason }
}

impl OuterTag {
    pub fn empty() -> OuterTag {
        OuterTag(Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Parses the text syntax `l h [0 ]0 ...`.
    pub fn parse(s: &str) -> Result<OuterTag, TagError> {
        s.split_whitespace()
            .map(|t| TagToken::parse(t).ok_or_else(|| TagError::BadToken(t.to_string())))
            .collect::<Result<Vec<_>, _>>()
            .map(OuterTag)
    }

    /// `e⁺`, applied `k` times.
    pub fn promoted(&self, k: u32) -> OuterTag {
        OuterTag(self.0.iter().map(|t| t.shifted(k as i64)).collect())
    }

    /// Inverse of `promoted(k)`; only meaningful when every depth is at least `k`.
    pub fn demoted(&self, k: u32) -> OuterTag {
        OuterTag(self.0.iter().map(|t| t.shifted(-(k as i64))).collect())
    }

    pub fn concat(&self, other: &OuterTag) -> OuterTag {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        OuterTag(v)
    }

    /// `⟅⁰f⁺⟆⁰ℏe`.
    pub fn wrap(f: &OuterTag, e: &OuterTag) -> OuterTag {
        let mut v = Vec::with_capacity(f.len() + e.len() + 3);
        v.push(TagToken::Open(0));
        v.extend(f.0.iter().map(|t| t.shifted(1)));
        v.push(TagToken::Close(0));
        v.push(TagToken::H);
        v.extend_from_slice(&e.0);
        OuterTag(v)
    }

    /// Splits `⟅⁰f⁺⟆⁰ℏe` into `(f, e)`.
    pub fn unwrap_group(&self) -> Option<(OuterTag, OuterTag)> {
        let t = &self.0;
        if t.first() != Some(&TagToken::Open(0)) {
            return None;
        }
        let close = t.iter().position(|x| *x == TagToken::Close(0))?;
        if t.get(close + 1) != Some(&TagToken::H) {
            return None;
        }
        let f = OuterTag(t[1..close].iter().map(|x| x.shifted(-1)).collect());
        Some((f, OuterTag(t[close + 2..].to_vec())))
    }

    /// The contents of every group, shifted back to depth 0.
    pub fn group_contents(&self) -> Vec<OuterTag> {
        let t = &self.0;
        let mut out = Vec::new();
        for (i, x) in t.iter().enumerate() {
            if let TagToken::Open(d) = *x {
                if let Some(j) = t[i..].iter().position(|y| *y == TagToken::Close(d)) {
                    out.push(OuterTag(t[i + 1..i + j].to_vec()).demoted(d + 1));
                }
            }
        }
        out
    }

    /// The thread identifier `⟅⁰g⁺⟆⁰ℏ⟅⁰f⁺⟆⁰` naming the pair of threads `(g, f)`.
    pub fn pair_id(g: &OuterTag, f: &OuterTag) -> OuterTag {
        let mut v = OuterTag::wrap(g, &OuterTag::empty()).0;
        v.push(TagToken::Open(0));
        v.extend(f.0.iter().map(|t| t.shifted(1)));
        v.push(TagToken::Close(0));
        OuterTag(v)
    }

    /// Inverse of `pair_id`.
    pub fn split_pair_id(&self) -> Option<(OuterTag, OuterTag)> {
        let (g, rest) = self.unwrap_group()?;
        let t = &rest.0;
        if t.len() < 2 || t[0] != TagToken::Open(0) || t[t.len() - 1] != TagToken::Close(0) {
            return None;
        }
        if t[1..t.len() - 1]
            .iter()
            .any(|x| matches!(x, TagToken::Open(0) | TagToken::Close(0)))
        {
            return None;
        }
        let f = OuterTag(t[1..t.len() - 1].iter().map(|x| x.shifted(-1)).collect());
        Some((g, f))
    }

    pub fn check_wellformed(&self) -> Result<(), TagError> {
        check_range(&self.0, 0, 0, false).map(|_| ())
    }

    pub fn is_wellformed(&self) -> bool {
        self.check_wellformed().is_ok()
    }

    /// `ede`: decoding of the tag via `de`.
    pub fn decode(&self) -> Result<NatSeq, TagError> {
        check_range(&self.0, 0, 0, true)
    }
}

impl fmt::Display for OuterTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for t in &self.0 {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Validates `toks` as a depth-`depth` word and returns its `de` value.
/// `base` is the absolute index of `toks[0]`, for error reporting. Without
/// `values` only the shape is checked and bracket groups count as zero.
fn check_range(toks: &[TagToken], depth: u32, base: usize, values: bool) -> Result<NatSeq, TagError> {
    let mut out = Vec::new();
    let mut i = 0;
    loop {
        // one segment: either ℓ* or a single bracket group
        let start = i;
        let mut ells = 0u64;
        let mut group: Option<BigUint> = None;
        while i < toks.len() && toks[i] != TagToken::H {
            match toks[i] {
                TagToken::L => {
                    if group.is_some() {
                        return Err(malformed(base + i, "letter after bracket group"));
                    }
                    ells += 1;
                    i += 1;
                }
                TagToken::Open(d) => {
                    if d != depth {
                        return Err(malformed(base + i, "open depth differs from nesting"));
                    }
                    if group.is_some() || i != start {
                        return Err(malformed(base + i, "bracket group must stand alone"));
                    }
                    let close = find_close(toks, i, depth).ok_or_else(|| malformed(base + i, "unmatched open"))?;
                    let inner = check_range(&toks[i + 1..close], depth + 1, base + i + 1, values)?;
                    group = Some(if values { seq_encode(&inner) } else { BigUint::zero() });
                    i = close + 1;
                }
                TagToken::Close(_) => return Err(malformed(base + i, "unmatched close")),
                TagToken::H => unreachable!(),
            }
        }
        out.push(group.unwrap_or_else(|| BigUint::from(ells)));
        if i >= toks.len() {
            return Ok(out);
        }
        i += 1;
    }
}

fn find_close(toks: &[TagToken], open: usize, depth: u32) -> Option<usize> {
    let mut level = 0usize;
    for (k, t) in toks.iter().enumerate().skip(open) {
        match t {
            TagToken::Open(_) => level += 1,
            TagToken::Close(d) => {
                level -= 1;
                if level == 0 {
                    return if *d == depth { Some(k) } else { None };
                }
            }
            _ => {}
        }
    }
    None
}

fn cantor(a: &BigUint, b: &BigUint) -> BigUint {
    let s = a + b;
    (&s * (&s + 1u32)) / 2u32 + b
}

fn uncantor(z: &BigUint) -> (BigUint, BigUint) {
    let w = ((z * 8u32 + 1u32).sqrt() - 1u32) / 2u32;
    let t = (&w * (&w + 1u32)) / 2u32;
    let b = z - t;
    let a = w - &b;
    (a, b)
}

/// The fixed bijection `ℕ* → ℕ`: `f(ε) = 0`, `f(s·x) = cantor(f(s), x) + 1`.
pub fn seq_encode(s: &[BigUint]) -> BigUint {
    s.iter().fold(BigUint::zero(), |acc, x| cantor(&acc, x) + 1u32)
}

pub fn seq_decode(n: &BigUint) -> NatSeq {
    let mut out = Vec::new();
    let mut cur = n.clone();
    while !cur.is_zero() {
        let (a, b) = uncantor(&(cur - BigUint::one()));
        out.push(b);
        cur = a;
    }
    out.reverse();
    out
}

/// `de ∘ 𝒪⁻¹`.
pub fn decode_tag(e: &OuterTag) -> Result<NatSeq, TagError> {
    e.decode()
}

/// `e⁺`.
pub fn promote_depths(e: &OuterTag) -> OuterTag {
    e.promoted(1)
}

pub fn check_wellformed(e: &OuterTag) -> Result<(), TagError> {
    e.check_wellformed()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tag(s: &str) -> OuterTag {
        OuterTag::parse(s).unwrap()
    }

    #[test]
    fn codec_base_cases() {
        assert_eq!(seq_encode(&[]), BigUint::zero());
        assert_eq!(seq_encode(&nats(&[0])), BigUint::one());
        assert_eq!(seq_decode(&BigUint::one()), nats(&[0]));
        assert_eq!(seq_decode(&seq_encode(&nats(&[2, 3, 5]))), nats(&[2, 3, 5]));
    }

    #[test]
    fn de_examples() {
        assert_eq!(decode_tag(&tag("l l h l l l")).unwrap(), nats(&[2, 3]));
        assert_eq!(decode_tag(&tag("")).unwrap(), nats(&[0]));
        assert_eq!(decode_tag(&tag("[0 ]0")).unwrap(), vec![seq_encode(&nats(&[0]))]);
        assert_eq!(decode_tag(&tag("[0 ]0 h")).unwrap(), nats(&[1, 0]));
    }

    #[test]
    fn wellformedness() {
        assert!(tag("[0 ]0").is_wellformed());
        assert!(tag("[0 [1 ]1 ]0").is_wellformed());
        assert_eq!(
            tag("[1 ]1").check_wellformed(),
            Err(TagError::Malformed {
                index: 0,
                reason: "open depth differs from nesting"
            })
        );
        assert!(!tag("l [0 ]0").is_wellformed());
        assert!(!tag("[0 ]0 [0 ]0").is_wellformed());
        assert!(!tag("]0").is_wellformed());
        assert!(!tag("[0 [1 ]0 ]1").is_wellformed());
    }

    #[test]
    fn promotion_and_groups() {
        assert_eq!(promote_depths(&tag("l h l")), tag("l h l"));
        assert_eq!(promote_depths(&tag("[0 l ]0")), tag("[1 l ]1"));
        let f = tag("l h l");
        let e = tag("[0 ]0 h");
        let w = OuterTag::wrap(&f, &e);
        assert_eq!(w, tag("[0 l h l ]0 h [0 ]0 h"));
        assert_eq!(w.unwrap_group(), Some((f.clone(), e.clone())));
        let p = OuterTag::pair_id(&f, &e);
        assert!(p.is_wellformed());
        assert_eq!(p.split_pair_id(), Some((f, e)));
    }

    #[test]
    fn text_round_trip() {
        let t = tag("[0 [1 l ]1 h [1 ]1 ]0 h l");
        assert_eq!(OuterTag::parse(&t.to_string()).unwrap(), t);
        assert!(OuterTag::parse("x").is_err());
    }
}
