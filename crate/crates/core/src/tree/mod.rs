//! Finitely presented trees built from spines and attachment rules.
//!
//! Each definition has a spine (a term, stored in normal form) and a list of
//! attachments. An attachment hangs copies of another definition above every
//! point of a spine orbit, or above a cut between two spine factors. A cut
//! is realised by a new irrational point (colour `I`) inserted into the
//! spine; the resulting spine is called the completed spine below.
//!
//! Text format, one definition per line:
//!
//! ```text
//! NAME = spine TERM [with ATTACH ("," ATTACH)*]
//! ATTACH := (INT | omega) x NAME at (orbit INT | cut INT | top)
//! root NAME
//! ```
//!
//! The first definition is the root unless a `root` line names another.

mod backforth;
mod chains;
mod sample;
mod table;

pub use backforth::{annotate, two_orbit_equiv, Annotations, Equivalence, PairError};
pub use chains::chain_types;
pub use sample::{materialize_tree, Origin, SampleBudget, TreeSample};
pub use table::{
    check_categorical, ramification_table, Condition, Outcome, PointClass, Predicate, RamCount,
    RamTable, Verdict, Witness, CLASS_BOUND,
};

use crate::terms::{
    normalize, one_orbits, orbit_count, parse_term, Card, NfSequence, ParseError, Term,
};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Term { line: usize, source: ParseError },
    #[error("line {line}: `{name}` is not defined")]
    Undefined { line: usize, name: String },
    #[error("line {line}: `{name}` is defined twice")]
    Redefined { line: usize, name: String },
    #[error("line {line}: orbit {orbit} is out of range, the spine of `{def}` has {count} orbits")]
    BadOrbit {
        line: usize,
        def: String,
        orbit: usize,
        count: usize,
    },
    #[error("line {line}: cut {cut} is out of range, the spine of `{def}` has {count} factors")]
    BadCut {
        line: usize,
        def: String,
        cut: usize,
        count: usize,
    },
    #[error("line {line}: `{child}` is attached twice at the same site of `{def}`")]
    DuplicateAttachment {
        line: usize,
        def: String,
        child: String,
    },
    #[error("line {line}: the cut at the top of `{def}` needs at least two attached copies")]
    LonelyTopCut { line: usize, def: String },
    #[error("the specification has no definitions")]
    Empty,
    #[error("infinitely many maximal chain types, e.g. {}", render_family(.0))]
    InfiniteChainTypes(Vec<NfSequence>),
    #[error("infinitely many realised predicates, e.g. {}", .0.iter().take(8).map(ToString::to_string).collect::<Vec<_>>().join(" "))]
    InfinitePredicates(Vec<Predicate>),
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("{0}")]
    Sample(String),
}

fn render_family(family: &[NfSequence]) -> String {
    family
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Multiplicity {
    Finite(u32),
    Omega,
}

impl Multiplicity {
    pub fn card(self) -> Card {
        match self {
            Multiplicity::Finite(n) => Card::Finite(n.into()),
            Multiplicity::Omega => Card::Omega,
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(n) => write!(f, "{n}"),
            Multiplicity::Omega => f.write_str("omega"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AttachSite {
    /// Every point of this orbit of the spine.
    Orbit(usize),
    /// Just above the top-level spine factor with this index.
    Cut(usize),
    /// Above the whole spine.
    Top,
}

impl fmt::Display for AttachSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttachSite::Orbit(o) => write!(f, "orbit {o}"),
            AttachSite::Cut(k) => write!(f, "cut {k}"),
            AttachSite::Top => f.write_str("top"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attachment {
    pub site: AttachSite,
    pub mult: Multiplicity,
    pub child: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDef {
    pub spine: Term,
    pub attachments: Vec<Attachment>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeSpec {
    defs: Vec<(String, TreeDef)>,
    root: usize,
    warnings: Vec<String>,
}

impl TreeSpec {
    pub fn defs(&self) -> &[(String, TreeDef)] {
        &self.defs
    }

    pub fn root(&self) -> &str {
        &self.defs[self.root].0
    }

    pub fn def(&self, name: &str) -> Option<&TreeDef> {
        self.defs.iter().find(|(n, _)| n == name).map(|(_, d)| d)
    }

    /// Notes produced while normalizing attachment sites.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    fn index_of(&self, name: &str) -> usize {
        self.defs
            .iter()
            .position(|(n, _)| n == name)
            .expect("validated specification")
    }

    /// The spec with the definition graph made explicit.
    pub(crate) fn compile(&self) -> Compiled {
        let mut defs = Vec::new();
        for (name, def) in &self.defs {
            defs.push(compile_def(self, name, def));
        }
        Compiled {
            defs,
            root: self.root,
        }
    }
}

impl fmt::Display for TreeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, def) in &self.defs {
            write!(f, "{name} = spine {}", def.spine)?;
            for (i, a) in def.attachments.iter().enumerate() {
                let sep = if i == 0 { " with " } else { ", " };
                write!(f, "{sep}{} x {} at {}", a.mult, a.child, a.site)?;
            }
            writeln!(f)?;
        }
        writeln!(f, "root {}", self.root())
    }
}

/// An attachment resolved to an orbit of the completed spine.
#[derive(Debug, Clone)]
pub(crate) struct Edge {
    pub orbit: usize,
    pub child: usize,
    pub mult: Multiplicity,
    /// Normal form of the closed initial segment of the completed spine
    /// ending at a point of `orbit`.
    pub label: Term,
    /// Chains leaving one copy of the parent through this edge, per chain
    /// of the child.
    pub weight: Card,
}

#[derive(Debug, Clone)]
pub(crate) struct CompiledDef {
    pub name: String,
    /// The spine with one `I` point inserted at every cut that carries
    /// attachments.
    pub completed: Term,
    pub edges: Vec<Edge>,
    /// Whether the completed spine is itself a maximal chain of its copy.
    pub terminal: bool,
}

#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    pub defs: Vec<CompiledDef>,
    pub root: usize,
}

fn compile_def(spec: &TreeSpec, name: &str, def: &TreeDef) -> CompiledDef {
    let factors = def.spine.factors();
    let cuts: BTreeSet<usize> = def
        .attachments
        .iter()
        .filter_map(|a| match a.site {
            AttachSite::Cut(k) => Some(k),
            AttachSite::Top => Some(factors.len() - 1),
            AttachSite::Orbit(_) => None,
        })
        .collect();
    let mut completed_factors = Vec::new();
    let mut orbit_map = Vec::new();
    let mut cut_orbit = std::collections::BTreeMap::new();
    let mut next = 0;
    for (k, f) in factors.iter().enumerate() {
        for _ in 0..orbit_count(f) {
            orbit_map.push(next);
            next += 1;
        }
        completed_factors.push(f.clone());
        if cuts.contains(&k) {
            cut_orbit.insert(k, next);
            completed_factors.push(Term::irrational());
            next += 1;
        }
    }
    let completed = Term::concat(completed_factors);
    let edges: Vec<Edge> = def
        .attachments
        .iter()
        .map(|a| {
            let orbit = match a.site {
                AttachSite::Orbit(o) => orbit_map[o],
                AttachSite::Cut(k) => cut_orbit[&k],
                AttachSite::Top => cut_orbit[&(factors.len() - 1)],
            };
            Edge {
                orbit,
                child: spec.index_of(&a.child),
                mult: a.mult,
                label: normalize(&crate::terms::down_through(&completed, orbit)),
                weight: crate::terms::points_in_orbit(&completed, orbit) * a.mult.card(),
            }
        })
        .collect();
    let top_orbit = orbit_count(&completed) - 1;
    let terminal = !completed.has_max() || edges.iter().all(|e| e.orbit != top_orbit);
    CompiledDef {
        name: name.to_string(),
        completed,
        edges,
        terminal,
    }
}

struct RawAttach {
    site: AttachSite,
    mult: Multiplicity,
    child: String,
}

fn syntax(line: usize, msg: impl Into<String>) -> SpecError {
    SpecError::Syntax {
        line,
        msg: msg.into(),
    }
}

/// Splits at top-level commas (outside parentheses).
fn split_top_level(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}

/// Byte offset of the `with` keyword outside parentheses.
fn find_with(text: &str) -> Option<usize> {
    let bytes = text.as_bytes();
    let mut depth = 0i32;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'w' if depth == 0 && text[i..].starts_with("with") => {
                let before = i == 0 || bytes[i - 1].is_ascii_whitespace();
                let after = bytes.get(i + 4).is_none_or(|c| c.is_ascii_whitespace());
                if before && after {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

fn parse_attach(line: usize, text: &str) -> Result<RawAttach, SpecError> {
    let words: Vec<&str> = text.split_whitespace().collect();
    let (mult, child, site) = match words.as_slice() {
        [m, "x", child, "at", site @ ..] => (*m, *child, site),
        _ => {
            return Err(syntax(
                line,
                format!("malformed attachment `{}`", text.trim()),
            ))
        }
    };
    let mult = match mult {
        "omega" => Multiplicity::Omega,
        m => match m.parse::<u32>() {
            Ok(n) if n > 0 => Multiplicity::Finite(n),
            _ => {
                return Err(syntax(
                    line,
                    format!("multiplicity `{m}` is not a positive integer or omega"),
                ))
            }
        },
    };
    let index = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| syntax(line, format!("`{s}` is not an index")))
    };
    let site = match site {
        ["orbit", o] => AttachSite::Orbit(index(o)?),
        ["cut", k] => AttachSite::Cut(index(k)?),
        ["top"] => AttachSite::Top,
        _ => return Err(syntax(line, format!("unknown site `{}`", site.join(" ")))),
    };
    Ok(RawAttach {
        site,
        mult,
        child: child.to_string(),
    })
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Orbit index of the maximum of spine factor `k`, if that factor has one.
fn factor_max_orbit(spine: &Term, k: usize) -> Option<usize> {
    let factors = spine.factors();
    if !factors[k].has_max() {
        return None;
    }
    let before: usize = factors[..k].iter().map(orbit_count).sum();
    Some(before + orbit_count(&factors[k]) - 1)
}

pub fn parse_spec(text: &str) -> Result<TreeSpec, SpecError> {
    let mut raw: Vec<(usize, String, Term, Vec<RawAttach>)> = Vec::new();
    let mut root: Option<(usize, String)> = None;
    for (i, line_text) in text.lines().enumerate() {
        let line = i + 1;
        let content = line_text.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("root ") {
            let name = rest.trim();
            if !is_name(name) {
                return Err(syntax(line, format!("`{name}` is not a name")));
            }
            root = Some((line, name.to_string()));
            continue;
        }
        let (name, body) = content
            .split_once('=')
            .ok_or_else(|| syntax(line, "expected `NAME = spine TERM`"))?;
        let name = name.trim();
        if !is_name(name) {
            return Err(syntax(line, format!("`{name}` is not a name")));
        }
        let body = body
            .trim()
            .strip_prefix("spine")
            .filter(|rest| rest.starts_with(char::is_whitespace))
            .ok_or_else(|| syntax(line, "expected the keyword `spine`"))?;
        let (term_text, attach_text) = match find_with(body) {
            Some(at) => (&body[..at], Some(&body[at + 4..])),
            None => (body, None),
        };
        let spine =
            parse_term(term_text.trim()).map_err(|source| SpecError::Term { line, source })?;
        let attachments = match attach_text {
            None => Vec::new(),
            Some(t) => split_top_level(t)
                .into_iter()
                .map(|a| parse_attach(line, a))
                .collect::<Result<_, _>>()?,
        };
        if raw.iter().any(|(_, n, _, _)| n == name) {
            return Err(SpecError::Redefined {
                line,
                name: name.to_string(),
            });
        }
        raw.push((line, name.to_string(), normalize(&spine), attachments));
    }
    if raw.is_empty() {
        return Err(SpecError::Empty);
    }
    let root = match root {
        None => 0,
        Some((line, name)) => raw
            .iter()
            .position(|(_, n, _, _)| *n == name)
            .ok_or(SpecError::Undefined { line, name })?,
    };
    let mut warnings = Vec::new();
    let mut defs = Vec::new();
    for (line, name, spine, attachments) in &raw {
        let factors = spine.factors().len();
        let orbits = one_orbits(spine).len();
        let mut seen = BTreeSet::new();
        let mut resolved = Vec::new();
        for a in attachments {
            if !raw.iter().any(|(_, n, _, _)| *n == a.child) {
                return Err(SpecError::Undefined {
                    line: *line,
                    name: a.child.clone(),
                });
            }
            let cut = match a.site {
                AttachSite::Orbit(o) if o >= orbits => {
                    return Err(SpecError::BadOrbit {
                        line: *line,
                        def: name.clone(),
                        orbit: o,
                        count: orbits,
                    })
                }
                AttachSite::Orbit(_) => None,
                AttachSite::Cut(k) if k >= factors => {
                    return Err(SpecError::BadCut {
                        line: *line,
                        def: name.clone(),
                        cut: k,
                        count: factors,
                    })
                }
                AttachSite::Cut(k) => Some(k),
                AttachSite::Top => Some(factors - 1),
            };
            let mut site = match cut {
                Some(k) if k + 1 == factors => AttachSite::Top,
                Some(k) => AttachSite::Cut(k),
                None => a.site,
            };
            if let Some(k) = cut {
                if let Some(o) = factor_max_orbit(spine, k) {
                    warnings.push(format!(
                        "line {line}: `{}` in `{name}`: the factor below {} has a greatest point, using orbit {o}",
                        a.child, a.site
                    ));
                    site = AttachSite::Orbit(o);
                }
            }
            if !seen.insert((site, a.child.clone())) {
                return Err(SpecError::DuplicateAttachment {
                    line: *line,
                    def: name.clone(),
                    child: a.child.clone(),
                });
            }
            resolved.push(Attachment {
                site,
                mult: a.mult,
                child: a.child.clone(),
            });
        }
        let top_copies: Vec<Multiplicity> = resolved
            .iter()
            .filter(|a| a.site == AttachSite::Top)
            .map(|a| a.mult)
            .collect();
        if top_copies == [Multiplicity::Finite(1)] {
            return Err(SpecError::LonelyTopCut {
                line: *line,
                def: name.clone(),
            });
        }
        defs.push((
            name.clone(),
            TreeDef {
                spine: spine.clone(),
                attachments: resolved,
            },
        ));
    }
    Ok(TreeSpec {
        defs,
        root,
        warnings,
    })
}
