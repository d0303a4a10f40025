//! Terms for countably categorical coloured linear orders.
//!
//! A term is a coloured singleton, a concatenation of terms, or a dense
//! shuffle of finitely many terms. Shuffle constituents form a set: they are
//! kept sorted and deduplicated, so permuting or repeating constituents does
//! not produce a different value. Concatenations are kept flat.

mod normal;
mod orbit;
mod parse;
mod sample;
mod sequence;

pub use normal::{is_normal, normalize, one_step_rewrites, Rewrite, RewriteRule};
pub use orbit::{
    down_through, one_orbits, orbit_count, points_in_orbit, segments_between, up_from,
    OrbitDescriptor,
};
pub use parse::{parse_sequence, parse_term, parse_term_in, Alphabet, ParseError};
pub use sample::{materialize, min_size, LinearSample, SampleError, SamplePoint};
pub(crate) use sequence::nf_factors;
pub use sequence::{is_categorical_chain, normalize_sequence, NfSequence, Tail};

use std::fmt;

/// A colour tag. `1` is the uncoloured singleton and `I` marks irrational
/// points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Colour(String);

impl Colour {
    pub const PLAIN: &'static str = "1";
    pub const IRRATIONAL: &'static str = "I";

    pub fn new(tag: impl Into<String>) -> Self {
        Colour(tag.into())
    }

    pub fn plain() -> Self {
        Colour(Self::PLAIN.into())
    }

    pub fn irrational() -> Self {
        Colour(Self::IRRATIONAL.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_plain(&self) -> bool {
        self.0 == Self::PLAIN
    }

    pub fn is_irrational(&self) -> bool {
        self.0 == Self::IRRATIONAL
    }
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// The variant order (singleton, shuffle, concatenation) followed by
/// lexicographic comparison of components is the total order used to sort
/// shuffle constituents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Singleton(Colour),
    Shuffle(Vec<Term>),
    Concat(Vec<Term>),
}

impl Term {
    pub fn one() -> Term {
        Term::Singleton(Colour::plain())
    }

    pub fn colour(tag: &str) -> Term {
        Term::Singleton(Colour::new(tag))
    }

    pub fn irrational() -> Term {
        Term::Singleton(Colour::irrational())
    }

    /// Flattening concatenation. Panics on an empty list.
    pub fn concat(parts: Vec<Term>) -> Term {
        Term::concat_opt(parts).expect("concatenation of no terms")
    }

    /// Flattening concatenation; `None` for the empty order.
    pub fn concat_opt(parts: Vec<Term>) -> Option<Term> {
        let mut flat = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                Term::Concat(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => None,
            1 => flat.pop(),
            _ => Some(Term::Concat(flat)),
        }
    }

    /// Shuffle over the set of `parts`. Panics on an empty list.
    pub fn shuffle(mut parts: Vec<Term>) -> Term {
        assert!(!parts.is_empty(), "shuffle needs at least one constituent");
        parts.sort();
        parts.dedup();
        Term::Shuffle(parts)
    }

    /// Rebuilds the term through the smart constructors, restoring the
    /// representation invariants if the enum was assembled by hand.
    pub fn canonical(self) -> Term {
        match self {
            Term::Singleton(_) => self,
            Term::Shuffle(parts) => Term::shuffle(parts.into_iter().map(Term::canonical).collect()),
            Term::Concat(parts) => Term::concat(parts.into_iter().map(Term::canonical).collect()),
        }
    }

    /// Top-level concatenation factors (the term itself if not a concatenation).
    pub fn factors(&self) -> &[Term] {
        match self {
            Term::Concat(parts) => parts,
            other => std::slice::from_ref(other),
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Term::Singleton(_) => true,
            Term::Shuffle(_) => false,
            Term::Concat(parts) => parts.iter().all(Term::is_finite),
        }
    }

    /// Number of points of a finite term.
    pub fn finite_len(&self) -> Option<usize> {
        match self {
            Term::Singleton(_) => Some(1),
            Term::Shuffle(_) => None,
            Term::Concat(parts) => parts.iter().map(Term::finite_len).sum(),
        }
    }

    pub fn has_min(&self) -> bool {
        match self {
            Term::Singleton(_) => true,
            Term::Shuffle(_) => false,
            Term::Concat(parts) => parts[0].has_min(),
        }
    }

    pub fn has_max(&self) -> bool {
        match self {
            Term::Singleton(_) => true,
            Term::Shuffle(_) => false,
            Term::Concat(parts) => parts[parts.len() - 1].has_max(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Singleton(_) => 0,
            Term::Shuffle(parts) | Term::Concat(parts) => {
                1 + parts.iter().map(Term::depth).max().unwrap_or(0)
            }
        }
    }

    /// Every colour tag occurring in the term.
    pub fn colours(&self) -> Vec<&Colour> {
        let mut out = Vec::new();
        self.collect_colours(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_colours<'a>(&'a self, out: &mut Vec<&'a Colour>) {
        match self {
            Term::Singleton(c) => out.push(c),
            Term::Shuffle(parts) | Term::Concat(parts) => {
                parts.iter().for_each(|p| p.collect_colours(out))
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Singleton(c) => write!(f, "{c}"),
            Term::Shuffle(parts) => {
                f.write_str("Q(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
            Term::Concat(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str("^")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}

/// A cardinal that is either finite or countably infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Card {
    Finite(u64),
    Omega,
}

impl Card {
    pub const ZERO: Card = Card::Finite(0);
    pub const ONE: Card = Card::Finite(1);

    pub fn is_zero(self) -> bool {
        self == Card::ZERO
    }
}

impl std::ops::Add for Card {
    type Output = Card;

    fn add(self, other: Card) -> Card {
        match (self, other) {
            (Card::Finite(a), Card::Finite(b)) => Card::Finite(a.saturating_add(b)),
            _ => Card::Omega,
        }
    }
}

impl std::ops::Mul for Card {
    type Output = Card;

    fn mul(self, other: Card) -> Card {
        match (self, other) {
            (Card::Finite(0), _) | (_, Card::Finite(0)) => Card::ZERO,
            (Card::Finite(a), Card::Finite(b)) => Card::Finite(a.saturating_mul(b)),
            _ => Card::Omega,
        }
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Card::Finite(n) => write!(f, "{n}"),
            Card::Omega => f.write_str("omega"),
        }
    }
}
