//! Ramification predicates and the three-condition categoricity check.
//!
//! A point `x` realises the predicate `(i, m, n)` when it lies on exactly
//! `i` maximal chains of type `m` in each of which it sits in orbit `n`.
//! Points are grouped into classes `(base, def, orbit)`: `base` is the
//! normal form of everything below the copy of `def` containing `x`, and
//! `orbit` is the orbit of `x` in the completed spine of `def`. Points of
//! one class realise the same predicates.

use super::chains::{continuations, TypeCounts};
use super::{Compiled, SpecError, TreeSpec};
use crate::terms::{
    down_through, is_categorical_chain, nf_factors, normalize, orbit_count, segments_between,
    up_from, Card, NfSequence, Term,
};
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

/// Most point classes explored before the realised set is declared
/// unbounded.
pub const CLASS_BOUND: usize = 256;

/// A chain count after capping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RamCount {
    Exactly(u64),
    /// Finite but larger than the cap.
    AboveCap,
    Omega,
}

impl RamCount {
    pub fn capped(n: Card, cap: u64) -> RamCount {
        match n {
            Card::Finite(k) if k <= cap => RamCount::Exactly(k),
            Card::Finite(_) => RamCount::AboveCap,
            Card::Omega => RamCount::Omega,
        }
    }
}

impl fmt::Display for RamCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RamCount::Exactly(k) => write!(f, "{k}"),
            RamCount::AboveCap => f.write_str(">cap"),
            RamCount::Omega => f.write_str("omega"),
        }
    }
}

/// `(i, (m, n))`: on exactly `i` maximal chains of type `m`, in orbit `n`
/// of each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Predicate {
    pub count: RamCount,
    pub chain: usize,
    pub orbit: usize,
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},({},{}))", self.count, self.chain, self.orbit)
    }
}

/// Predicates realised by one class of points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointClass {
    pub def: String,
    pub base: Option<Term>,
    /// Orbit in the completed spine of `def`.
    pub orbit: usize,
    pub predicates: BTreeSet<Predicate>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamTable {
    pub chain_types: Vec<NfSequence>,
    pub realised: BTreeSet<Predicate>,
    pub classes: Vec<PointClass>,
    pub cap: u64,
}

impl fmt::Display for RamTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (m, t) in self.chain_types.iter().enumerate() {
            writeln!(f, "chain {m}: {t}")?;
        }
        for c in &self.classes {
            let base = c.base.as_ref().map_or("-".to_string(), ToString::to_string);
            let preds: Vec<String> = c.predicates.iter().map(ToString::to_string).collect();
            writeln!(
                f,
                "class {} base {} orbit {}: {}",
                c.def,
                base,
                c.orbit,
                preds.join(" ")
            )?;
        }
        let all: Vec<String> = self.realised.iter().map(ToString::to_string).collect();
        writeln!(f, "realised: {}", all.join(" "))
    }
}

/// Positions of points in the chain types, keyed by the normal forms of
/// the closed segment below and the open segment above.
struct OrbitIndex {
    known: Vec<Vec<(Term, NfSequence)>>,
    extra: Vec<Vec<(Term, NfSequence)>>,
}

impl OrbitIndex {
    fn new(types: &[NfSequence]) -> Self {
        let known = types
            .iter()
            .map(|t| match t.as_term() {
                None => Vec::new(),
                Some(t) => (0..orbit_count(&t))
                    .map(|n| {
                        let up: Vec<Term> = up_from(&t, n).into_iter().collect();
                        (normalize(&down_through(&t, n)), NfSequence::finite(up))
                    })
                    .collect(),
            })
            .collect();
        OrbitIndex {
            known,
            extra: vec![Vec::new(); types.len()],
        }
    }

    fn orbit(&mut self, m: usize, down: &Term, up: &NfSequence) -> usize {
        let key = (down.clone(), up.clone());
        if let Some(n) = self.known[m].iter().position(|k| *k == key) {
            return n;
        }
        let base = self.known[m].len();
        let extra = &mut self.extra[m];
        match extra.iter().position(|k| *k == key) {
            Some(i) => base + i,
            None => {
                extra.push(key);
                base + extra.len() - 1
            }
        }
    }
}

/// Types of the chains strictly above a point of `orbit` in a copy of
/// definition `d`, with multiplicities.
fn above(c: &Compiled, cont: &[TypeCounts], d: usize, orbit: usize) -> TypeCounts {
    let def = &c.defs[d];
    let mut out = TypeCounts::new();
    let mut put = |k: NfSequence, n: Card| {
        if !n.is_zero() {
            let slot = out.entry(k).or_insert(Card::ZERO);
            *slot = *slot + n;
        }
    };
    if def.terminal {
        let up: Vec<Term> = up_from(&def.completed, orbit).into_iter().collect();
        put(NfSequence::finite(up), Card::ONE);
    }
    for e in &def.edges {
        for (seg, ys) in segments_between(&def.completed, orbit, e.orbit) {
            let seg: Vec<Term> = seg.into_iter().collect();
            for (rho, &n) in &cont[e.child] {
                put(rho.prepend(&seg), ys * e.mult.card() * n);
            }
        }
    }
    out
}

fn concat_nf(base: &Option<Term>, next: &Term) -> Term {
    let mut parts: Vec<Term> = base.iter().cloned().collect();
    parts.push(next.clone());
    Term::concat(nf_factors(&parts))
}

struct Built {
    table: RamTable,
    unbounded: bool,
}

fn build(c: &Compiled, cont: &[TypeCounts], cap: u64) -> Built {
    let mut chain_types: Vec<NfSequence> = cont[c.root].keys().cloned().collect();
    let mut index = OrbitIndex::new(&chain_types);
    let mut above_cache: HashMap<(usize, usize), TypeCounts> = HashMap::new();
    let mut queue: VecDeque<(Option<Term>, usize)> = VecDeque::from([(None, c.root)]);
    let mut seen: BTreeSet<(Option<Term>, usize)> = queue.iter().cloned().collect();
    let mut classes = Vec::new();
    let mut realised = BTreeSet::new();
    let mut unbounded = false;
    while let Some((base, d)) = queue.pop_front() {
        let def = &c.defs[d];
        for o in 0..orbit_count(&def.completed) {
            let down = concat_nf(&base, &normalize(&down_through(&def.completed, o)));
            let ups = above_cache
                .entry((d, o))
                .or_insert_with(|| above(c, cont, d, o))
                .clone();
            let mut per: BTreeMap<(usize, usize), Card> = BTreeMap::new();
            for (up, n) in ups {
                let full = up.prepend(std::slice::from_ref(&down));
                let m = match chain_types.iter().position(|t| *t == full) {
                    Some(m) => m,
                    None => {
                        chain_types.push(full.clone());
                        index.known.push(Vec::new());
                        index.extra.push(Vec::new());
                        chain_types.len() - 1
                    }
                };
                let n_orbit = index.orbit(m, &down, &up);
                let slot = per.entry((m, n_orbit)).or_insert(Card::ZERO);
                *slot = *slot + n;
            }
            let predicates: BTreeSet<Predicate> = per
                .into_iter()
                .map(|((chain, orbit), n)| Predicate {
                    count: RamCount::capped(n, cap),
                    chain,
                    orbit,
                })
                .collect();
            realised.extend(predicates.iter().copied());
            classes.push(PointClass {
                def: def.name.clone(),
                base: base.clone(),
                orbit: o,
                predicates,
            });
        }
        for e in &def.edges {
            let next = (Some(concat_nf(&base, &e.label)), e.child);
            if seen.contains(&next) {
                continue;
            }
            if seen.len() >= CLASS_BOUND {
                unbounded = true;
                continue;
            }
            seen.insert(next.clone());
            queue.push_back(next);
        }
    }
    Built {
        table: RamTable {
            chain_types,
            realised,
            classes,
            cap,
        },
        unbounded,
    }
}

/// The realised predicates of the tree, with counts capped at `cap`.
pub fn ramification_table(spec: &TreeSpec, cap: u64) -> Result<RamTable, SpecError> {
    let c = spec.compile();
    let cont = continuations(&c)?;
    let built = build(&c, &cont, cap);
    if built.unbounded {
        return Err(SpecError::InfinitePredicates(
            built.table.realised.into_iter().collect(),
        ));
    }
    Ok(built.table)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    NonCategoricalChain(NfSequence),
    ChainFamily(Vec<NfSequence>),
    PredicateFamily(Vec<Predicate>),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::NonCategoricalChain(s) => write!(f, "chain {s} is not countably categorical"),
            Witness::ChainFamily(family) => {
                let items: Vec<String> = family.iter().map(ToString::to_string).collect();
                write!(f, "chain types keep growing: {} ...", items.join("; "))
            }
            Witness::PredicateFamily(family) => {
                let items: Vec<String> = family.iter().take(8).map(ToString::to_string).collect();
                write!(
                    f,
                    "realised predicates keep growing: {} ...",
                    items.join(" ")
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(Witness),
    Indeterminate(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condition {
    pub title: &'static str,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub categorical: bool,
    pub conditions: [Condition; 3],
}

impl Verdict {
    /// The most informative failing condition, or else the first
    /// undecided one. A non-categorical chain is reported before a growing
    /// family, since the latter often follows from the former.
    pub fn first_problem(&self) -> Option<&Condition> {
        [1, 2, 0]
            .iter()
            .map(|&k| &self.conditions[k])
            .find(|c| matches!(c.outcome, Outcome::Fail(_)))
            .or_else(|| self.conditions.iter().find(|c| c.outcome != Outcome::Pass))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.first_problem() {
            None => writeln!(f, "categorical: yes")?,
            Some(c) => match &c.outcome {
                Outcome::Fail(w) => writeln!(f, "categorical: no ({w})")?,
                _ => writeln!(f, "categorical: no ({} is undecided)", c.title)?,
            },
        }
        for (i, c) in self.conditions.iter().enumerate() {
            let what = match &c.outcome {
                Outcome::Pass => "pass".to_string(),
                Outcome::Fail(w) => format!("fail, {w}"),
                Outcome::Indeterminate(why) => format!("indeterminate, {why}"),
            };
            writeln!(f, "condition {} ({}): {what}", i + 1, c.title)?;
        }
        Ok(())
    }
}

const TITLES: [&str; 3] = [
    "finitely many realised predicates",
    "every maximal chain is countably categorical",
    "finitely many maximal chain types",
];

/// Decides countable categoricity of the specified tree from its chain
/// types and realised predicates.
pub fn check_categorical(spec: &TreeSpec, cap: u64) -> Verdict {
    let c = spec.compile();
    let (first, second, third) = match continuations(&c) {
        Err(SpecError::InfiniteChainTypes(family)) => {
            let second = match family.iter().find(|t| !is_categorical_chain(t)) {
                Some(t) => Outcome::Fail(Witness::NonCategoricalChain(t.clone())),
                None => Outcome::Indeterminate("the chain types could not all be listed".into()),
            };
            (
                Outcome::Indeterminate("needs finitely many chain types".into()),
                second,
                Outcome::Fail(Witness::ChainFamily(family)),
            )
        }
        Err(other) => unreachable!("chain enumeration only reports infinite families: {other}"),
        Ok(cont) => {
            let built = build(&c, &cont, cap);
            let second = match built
                .table
                .chain_types
                .iter()
                .find(|t| !is_categorical_chain(t))
            {
                Some(t) => Outcome::Fail(Witness::NonCategoricalChain(t.clone())),
                None => Outcome::Pass,
            };
            let first = if built.unbounded {
                Outcome::Fail(Witness::PredicateFamily(
                    built.table.realised.iter().copied().collect(),
                ))
            } else if let Some(p) = built
                .table
                .realised
                .iter()
                .find(|p| p.count == RamCount::AboveCap)
            {
                Outcome::Indeterminate(format!("{p} exceeds the cap {cap}"))
            } else {
                Outcome::Pass
            };
            (first, second, Outcome::Pass)
        }
    };
    let conditions = [first, second, third]
        .into_iter()
        .zip(TITLES)
        .map(|(outcome, title)| Condition { title, outcome })
        .collect::<Vec<_>>()
        .try_into()
        .expect("three conditions");
    let conditions: [Condition; 3] = conditions;
    Verdict {
        categorical: conditions.iter().all(|c| c.outcome == Outcome::Pass),
        conditions,
    }
}
