//! Recursive-descent parser for the term grammar
//!
//! ```text
//! term   := factor ("^" factor)*
//! factor := "1" | IDENT | "Q(" term ("," term)* ")"
//! seq    := "[" term ("," term)* "]" ("*" "[" term ("," term)* "]" "w")?
//! ```
//!
//! Whitespace is insignificant. `Q` is reserved for shuffles.

use super::{Colour, Term};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown colour `{tag}` at {pos}")]
    UnknownColour { pos: usize, tag: String },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::UnknownColour { pos, .. } => *pos,
        }
    }
}

/// The colours a parser accepts. The reserved tags `1` and `I` are always
/// members; an open alphabet accepts every identifier.
#[derive(Debug, Clone, Default)]
pub struct Alphabet {
    tags: Option<BTreeSet<String>>,
}

impl Alphabet {
    pub fn open() -> Self {
        Alphabet { tags: None }
    }

    pub fn new<S: AsRef<str>>(tags: impl IntoIterator<Item = S>) -> Self {
        let mut set: BTreeSet<String> = tags.into_iter().map(|s| s.as_ref().to_string()).collect();
        set.insert(Colour::PLAIN.into());
        set.insert(Colour::IRRATIONAL.into());
        Alphabet { tags: Some(set) }
    }

    pub fn contains(&self, tag: &str) -> bool {
        match &self.tags {
            None => true,
            Some(set) => set.contains(tag),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    alphabet: &'a Alphabet,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, byte: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(b) if b == byte => {
                self.pos += 1;
                Ok(())
            }
            Some(b) => self.error(format!(
                "expected `{}`, found `{}`",
                byte as char, b as char
            )),
            None => self.error(format!("expected `{}`, found end of input", byte as char)),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut parts = vec![self.factor()?];
        while self.peek() == Some(b'^') {
            self.pos += 1;
            parts.push(self.factor()?);
        }
        Ok(Term::concat(parts))
    }

    fn term_list(&mut self, close: u8) -> Result<Vec<Term>, ParseError> {
        let mut items = vec![self.term()?];
        loop {
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                    items.push(self.term()?);
                }
                Some(b) if b == close => {
                    self.pos += 1;
                    return Ok(items);
                }
                Some(b) => {
                    return self.error(format!(
                        "expected `,` or `{}`, found `{}`",
                        close as char, b as char
                    ))
                }
                None => {
                    return self.error(format!("expected `{}`, found end of input", close as char))
                }
            }
        }
    }

    fn ident(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier")
    }

    fn factor(&mut self) -> Result<Term, ParseError> {
        let start = match self.peek() {
            None => return self.error("expected a term, found end of input"),
            Some(_) => self.pos,
        };
        match self.src[start] {
            b'1' => {
                self.pos += 1;
                if self
                    .src
                    .get(self.pos)
                    .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
                {
                    self.pos = start;
                    return self.error("colour tags must start with a letter");
                }
                Ok(Term::one())
            }
            b if b.is_ascii_alphabetic() || b == b'_' => {
                let tag = self.ident();
                if tag == "Q" {
                    self.expect(b'(')?;
                    if self.peek() == Some(b')') {
                        return self.error("a shuffle needs at least one constituent");
                    }
                    let parts = self.term_list(b')')?;
                    return Ok(Term::shuffle(parts));
                }
                if !self.alphabet.contains(tag) {
                    return Err(ParseError::UnknownColour {
                        pos: start,
                        tag: tag.to_string(),
                    });
                }
                Ok(Term::colour(tag))
            }
            b => self.error(format!("unexpected `{}`", b as char)),
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(b) => self.error(format!("trailing input starting with `{}`", b as char)),
        }
    }
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    parse_term_in(text, &Alphabet::open())
}

pub fn parse_term_in(text: &str, alphabet: &Alphabet) -> Result<Term, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        alphabet,
    };
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parses a sequence literal into its prefix and optional ω-period.
pub fn parse_sequence(text: &str) -> Result<(Vec<Term>, Option<Vec<Term>>), ParseError> {
    let alphabet = Alphabet::open();
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        alphabet: &alphabet,
    };
    p.expect(b'[')?;
    let prefix = p.term_list(b']')?;
    let period = if p.peek() == Some(b'*') {
        p.pos += 1;
        p.expect(b'[')?;
        let period = p.term_list(b']')?;
        p.expect(b'w')?;
        Some(period)
    } else {
        None
    };
    p.finish()?;
    Ok((prefix, period))
}
