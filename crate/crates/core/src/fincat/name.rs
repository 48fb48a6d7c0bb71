//! Canonical names for objects, morphisms and set elements.
//!
//! Every constructed category names its cells by a small tree built from
//! atoms, pairs and tagged nodes. Two cells are the same cell exactly when
//! their trees are structurally equal, which is what lets the isomorphism
//! witnesses compose to identities on the nose.
//!
//! The textual form is `atom`, `(left,right)` and `tag[inner]`. Atoms that
//! contain a reserved character are written as JSON string literals.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A canonical name: an atom, a pair of names, or a tagged name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(Arc<Node>);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Atom(String),
    Pair(Name, Name),
    Tagged(String, Name),
}

/// Terminator used by [`Name::list`].
pub const NIL: &str = "nil";

impl Name {
    pub fn atom(token: impl Into<String>) -> Self {
        Name(Arc::new(Node::Atom(token.into())))
    }

    pub fn pair(left: Name, right: Name) -> Self {
        Name(Arc::new(Node::Pair(left, right)))
    }

    pub fn tagged(tag: impl Into<String>, inner: Name) -> Self {
        Name(Arc::new(Node::Tagged(tag.into(), inner)))
    }

    /// Right-nested pairs terminated by the atom `nil`.
    pub fn list<I>(items: I) -> Self
    where
        I: IntoIterator<Item = Name>,
        I::IntoIter: DoubleEndedIterator,
    {
        items
            .into_iter()
            .rev()
            .fold(Name::atom(NIL), |acc, item| Name::pair(item, acc))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self.node() {
            Node::Atom(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_pair(&self) -> Option<(&Name, &Name)> {
        match self.node() {
            Node::Pair(l, r) => Some((l, r)),
            _ => None,
        }
    }

    pub fn as_tagged(&self) -> Option<(&str, &Name)> {
        match self.node() {
            Node::Tagged(t, inner) => Some((t, inner)),
            _ => None,
        }
    }

    /// Inverse of [`Name::list`]; `None` if the name is not a list.
    pub fn as_list(&self) -> Option<Vec<Name>> {
        let mut out = Vec::new();
        let mut cur = self;
        loop {
            match cur.node() {
                Node::Atom(s) if s == NIL => return Some(out),
                Node::Pair(head, tail) => {
                    out.push(head.clone());
                    cur = tail;
                }
                _ => return None,
            }
        }
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::atom(s)
    }
}

fn is_plain_atom(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| !c.is_whitespace() && !matches!(c, '(' | ')' | '[' | ']' | ',' | '"' | '\\'))
}

fn write_atom(f: &mut fmt::Formatter<'_>, s: &str) -> fmt::Result {
    if is_plain_atom(s) {
        return f.write_str(s);
    }
    f.write_str("\"")?;
    for c in s.chars() {
        match c {
            '"' => f.write_str("\\\"")?,
            '\\' => f.write_str("\\\\")?,
            '\n' => f.write_str("\\n")?,
            '\t' => f.write_str("\\t")?,
            '\r' => f.write_str("\\r")?,
            c => write!(f, "{c}")?,
        }
    }
    f.write_str("\"")
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Atom(s) => write_atom(f, s),
            Node::Pair(l, r) => write!(f, "({l},{r})"),
            Node::Tagged(t, inner) => {
                write_atom(f, t)?;
                write!(f, "[{inner}]")
            }
        }
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn fail(&self, what: &str) -> Error {
        Error::Parse(format!("name `{}` at offset {}: {what}", self.src, self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), Error> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.fail(&format!("expected `{c}`")))
        }
    }

    fn token(&mut self) -> Result<String, Error> {
        if self.peek() == Some('"') {
            self.pos += 1;
            let mut out = String::new();
            loop {
                match self.peek() {
                    None => return Err(self.fail("unterminated string")),
                    Some('"') => {
                        self.pos += 1;
                        return Ok(out);
                    }
                    Some('\\') => {
                        self.pos += 1;
                        let c = match self.peek() {
                            Some('n') => '\n',
                            Some('t') => '\t',
                            Some('r') => '\r',
                            Some(c @ ('"' | '\\')) => c,
                            _ => return Err(self.fail("bad escape")),
                        };
                        out.push(c);
                        self.pos += 1;
                    }
                    Some(c) => {
                        out.push(c);
                        self.pos += 1;
                    }
                }
            }
        }
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_whitespace() || matches!(c, '(' | ')' | '[' | ']' | ',' | '"' | '\\') {
                break;
            }
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.fail("expected a token"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn name(&mut self) -> Result<Name, Error> {
        if self.peek() == Some('(') {
            self.pos += 1;
            let left = self.name()?;
            self.expect(',')?;
            let right = self.name()?;
            self.expect(')')?;
            return Ok(Name::pair(left, right));
        }
        let tok = self.token()?;
        if self.peek() == Some('[') {
            self.pos += 1;
            let inner = self.name()?;
            self.expect(']')?;
            return Ok(Name::tagged(tok, inner));
        }
        Ok(Name::atom(tok))
    }
}

impl FromStr for Name {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser {
            chars: s.chars().collect(),
            pos: 0,
            src: s,
        };
        let name = p.name()?;
        if p.pos != p.chars.len() {
            return Err(p.fail("trailing input"));
        }
        Ok(name)
    }
}

impl Serialize for Name {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Name {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
